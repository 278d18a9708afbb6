"""GF(2) linear algebra on int-packed rows, dispatching to the compiled kernel.

Set ``SSEQBENCH_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _gf2_py

BACKEND = "python"
_impl = _gf2_py
if os.environ.get("SSEQBENCH_PURE_PYTHON") != "1":
    try:
        from . import _gf2_core as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _gf2_py

echelonize = _impl.echelonize
reduce = _gf2_py.reduce
rank = _impl.rank
kernel = _impl.kernel
image_and_kernel = _impl.image_and_kernel


def bits(row: int) -> list[int]:
    out = []
    while row:
        low = row & -row
        out.append(low.bit_length() - 1)
        row ^= low
    return out


def from_bits(cols) -> int:
    row = 0
    for c in cols:
        row ^= 1 << c
    return row
