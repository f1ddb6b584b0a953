"""Pure-Python versions of the hot loops. Same contracts as ``_speedups``."""


def compose(a, b):
    """Right-action product: apply ``a`` then ``b``."""
    return tuple(map(b.__getitem__, a))


def invert(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def orbit_labels(gens, n):
    """Label every point by the smallest point of its orbit."""
    label = [-1] * n
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = start
        stack = [start]
        while stack:
            p = stack.pop()
            for g in gens:
                q = g[p]
                if label[q] < 0:
                    label[q] = start
                    stack.append(q)
    return label


def pair_orbit_labels(gens, n):
    """Orbit index of every ordered pair (a, b), flattened as a*n + b.

    Orbits are numbered in order of their lexicographically first pair.
    """
    size = n * n
    label = [-1] * size
    count = 0
    for start in range(size):
        if label[start] >= 0:
            continue
        label[start] = count
        stack = [start]
        while stack:
            p = stack.pop()
            a, b = divmod(p, n)
            for g in gens:
                q = g[a] * n + g[b]
                if label[q] < 0:
                    label[q] = count
                    stack.append(q)
        count += 1
    return label


def act_string(x, g):
    """The string x^g, i.e. position g[i] carries x[i]."""
    out = [0] * len(x)
    for i, c in enumerate(x):
        out[g[i]] = c
    return tuple(out)


def maps_string(x, y, g):
    """True iff x^g == y."""
    for i, c in enumerate(x):
        if y[g[i]] != c:
            return False
    return True


def wl_signatures(colors, n, ncolors):
    """One Weisfeiler-Leman round: signature of every pair of a flat color matrix."""
    out = []
    for a in range(n):
        row = colors[a * n:(a + 1) * n]
        for b in range(n):
            sig = sorted(row[z] * ncolors + colors[z * n + b] for z in range(n))
            out.append((colors[a * n + b], tuple(sig)))
    return out
