"""Smith normal form front end.

The invariant-factor path prefers the compiled ``_snf_ext`` kernel when it
was built and falls back to pure Python otherwise (or on int64 overflow).
Set ``CHAINFILL_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _snf_py

try:
    if os.environ.get("CHAINFILL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _snf_ext as _compiled
except ImportError:
    _compiled = None

KERNEL = "cython" if _compiled is not None else "python"


def smith_normal_form(M, ncols=None):
    """Return ``(U, S, V)`` with ``U M V = S`` in Smith normal form.

    ``M`` is any integer matrix given as a sequence of rows.  ``U`` and
    ``V`` are unimodular; ``S`` is diagonal with ``d1 | d2 | ...`` and
    nonnegative entries.
    """
    return _snf_py.smith_normal_form(M, ncols)


def invariant_factors(M, ncols=None):
    """Diagonal of the Smith form of ``M`` (divisor chain, zeros last)."""
    if _compiled is not None:
        try:
            return _compiled.invariant_factors(M, ncols)
        except OverflowError:
            pass
    return _snf_py.invariant_factors(M, ncols)


def invariant_factors_python(M, ncols=None):
    return _snf_py.invariant_factors(M, ncols)


def invariant_factors_compiled(M, ncols=None):
    if _compiled is None:
        raise RuntimeError("compiled SNF kernel is not available")
    return _compiled.invariant_factors(M, ncols)
