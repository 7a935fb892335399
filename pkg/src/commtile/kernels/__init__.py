"""Hot enumeration kernels with a compiled core and a pure-Python fallback.

The compiled backend (Cython, int64) is selected at import when the extension
was built; setting COMMTILE_PURE=1 forces the fallback.  Every dispatch first
bounds all intermediate values with exact Python integers and falls back to
the pure backend when int64 could overflow, so results are always exact.
"""

from __future__ import annotations

import os

from . import _pykern

try:
    from . import _ckern
except ImportError:  # extension not built
    _ckern = None

_FORCE_PURE = bool(os.environ.get("COMMTILE_PURE"))

#: values certified to stay strictly below this fit comfortably in int64
INT64_SAFE = 2**62


def backend_name() -> str:
    return "python" if (_ckern is None or _FORCE_PURE) else "c"


def available_backends():
    mods = [_pykern]
    if _ckern is not None:
        mods.append(_ckern)
    return mods


def _active(bound: int):
    if _ckern is not None and not _FORCE_PURE and bound < INT64_SAFE:
        return _ckern
    return _pykern


def _enum_bound(cols, counts) -> int:
    if not cols:
        return 0
    d = len(cols[0])
    return max(
        (sum((c - 1) * abs(col[i]) for col, c in zip(cols, counts)) for i in range(d)),
        default=0,
    )


def enumerate_points(cols, counts):
    """All points sum_j a_j*cols[j] with 0 <= a_j < counts[j], as tuples."""
    cols = [tuple(c) for c in cols]
    counts = [int(c) for c in counts]
    return _active(_enum_bound(cols, counts)).enumerate_points(cols, counts)


def count_images(cols, counts, map_rows) -> int:
    """Distinct images of the enumerated box under the integer map."""
    cols = [tuple(c) for c in cols]
    counts = [int(c) for c in counts]
    map_rows = [tuple(r) for r in map_rows]
    bound = 0
    if cols:
        d = len(cols[0])
        for r in map_rows:
            proj = [sum(r[i] * col[i] for i in range(d)) for col in cols]
            b = sum((c - 1) * abs(p) for p, c in zip(proj, counts))
            bound = max(bound, b)
    return _active(bound).count_images(cols, counts, map_rows)


def cover_multiplicity(translates, tile_points, radius):
    """(min, max) cover multiplicity of {t + s} over the window [-R, R]^d."""
    translates = [tuple(t) for t in translates]
    tile_points = [tuple(s) for s in tile_points]
    bound = 0
    for group in (translates, tile_points):
        for v in group:
            for x in v:
                bound = max(bound, abs(x))
    return _active(2 * bound + radius).cover_multiplicity(translates, tile_points, int(radius))
