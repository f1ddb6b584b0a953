# cython: language_level=3
"""Compiled versions of the hot loops in ``_purepy``."""
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM
from cpython.ref cimport Py_INCREF
from libc.stdlib cimport malloc, free


cpdef tuple compose(a, b):
    cdef Py_ssize_t n = len(a), i
    cdef tuple ta = tuple(a), tb = tuple(b)
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <object>PyTuple_GET_ITEM(tb, <Py_ssize_t><long>(<object>PyTuple_GET_ITEM(ta, i)))
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


cpdef tuple invert(a):
    cdef Py_ssize_t n = len(a), i
    cdef list out = [0] * n
    for i in range(n):
        out[<Py_ssize_t>a[i]] = i
    return tuple(out)


cdef long *_as_array(g, Py_ssize_t n) except NULL:
    cdef long *arr = <long *>malloc(n * sizeof(long))
    cdef Py_ssize_t i
    for i in range(n):
        arr[i] = g[i]
    return arr


def orbit_labels(gens, Py_ssize_t n):
    cdef Py_ssize_t ng = len(gens), k, i, top, p, q, start
    cdef long **g = <long **>malloc((ng + 1) * sizeof(long *))
    cdef long *label = <long *>malloc((n + 1) * sizeof(long))
    cdef long *stack = <long *>malloc((n + 1) * sizeof(long))
    try:
        for k in range(ng):
            g[k] = _as_array(gens[k], n)
        for i in range(n):
            label[i] = -1
        for start in range(n):
            if label[start] >= 0:
                continue
            label[start] = start
            top = 0
            stack[top] = start
            top += 1
            while top:
                top -= 1
                p = stack[top]
                for k in range(ng):
                    q = g[k][p]
                    if label[q] < 0:
                        label[q] = start
                        stack[top] = q
                        top += 1
        return [label[i] for i in range(n)]
    finally:
        for k in range(ng):
            free(g[k])
        free(g)
        free(label)
        free(stack)


def pair_orbit_labels(gens, Py_ssize_t n):
    cdef Py_ssize_t ng = len(gens), k, i, top, p, q, start, size = n * n, a, b
    cdef long count = 0
    cdef long **g = <long **>malloc((ng + 1) * sizeof(long *))
    cdef long *label = <long *>malloc((size + 1) * sizeof(long))
    cdef long *stack = <long *>malloc((size + 1) * sizeof(long))
    try:
        for k in range(ng):
            g[k] = _as_array(gens[k], n)
        for i in range(size):
            label[i] = -1
        for start in range(size):
            if label[start] >= 0:
                continue
            label[start] = count
            top = 0
            stack[top] = start
            top += 1
            while top:
                top -= 1
                p = stack[top]
                a = p // n
                b = p % n
                for k in range(ng):
                    q = g[k][a] * n + g[k][b]
                    if label[q] < 0:
                        label[q] = count
                        stack[top] = q
                        top += 1
            count += 1
        return [label[i] for i in range(size)]
    finally:
        for k in range(ng):
            free(g[k])
        free(g)
        free(label)
        free(stack)


cpdef tuple act_string(x, g):
    cdef Py_ssize_t n = len(x), i
    cdef list out = [0] * n
    for i in range(n):
        out[<Py_ssize_t>g[i]] = x[i]
    return tuple(out)


cpdef bint maps_string(x, y, g):
    cdef Py_ssize_t n = len(x), i
    for i in range(n):
        if y[<Py_ssize_t>g[i]] != x[i]:
            return False
    return True


def wl_signatures(colors, Py_ssize_t n, long ncolors):
    cdef Py_ssize_t a, b, z
    cdef long *c = <long *>malloc((n * n + 1) * sizeof(long))
    cdef list out = []
    cdef list sig
    try:
        for a in range(n * n):
            c[a] = colors[a]
        for a in range(n):
            for b in range(n):
                sig = [c[a * n + z] * ncolors + c[z * n + b] for z in range(n)]
                sig.sort()
                out.append((c[a * n + b], tuple(sig)))
        return out
    finally:
        free(c)
