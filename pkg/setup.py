"""Build the optional Cython kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GISO_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("giso._speedups", ["src/giso/_speedups.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
