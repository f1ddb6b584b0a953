"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``GISO_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("GISO_PURE_PYTHON"):
    from . import _purepy as backend
else:
    try:
        from . import _speedups as backend
    except ImportError:
        from . import _purepy as backend

BACKEND = "compiled" if backend.__name__.endswith("_speedups") else "python"

compose = backend.compose
invert = backend.invert
orbit_labels = backend.orbit_labels
pair_orbit_labels = backend.pair_orbit_labels
act_string = backend.act_string
maps_string = backend.maps_string
wl_signatures = backend.wl_signatures
