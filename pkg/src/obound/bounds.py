"""Closed-form bounds on the third overlap of a state triple.

Given ``x = r_AB`` and ``y = r_AC`` the unknown ``r_BC`` is confined to an
interval that depends on the model. Writing ``x = cos^2 b`` and
``y = cos^2 c`` the two quantum envelopes are ``cos^2(b - c)`` (upper) and
``cos^2(b + c)`` (lower); the lower one only binds pure qudits when
``x + y > 1``.
"""

from __future__ import annotations

import numpy as np

from .core import Interval, Model


def f_plus(x, y):
    """``(sqrt(xy) + sqrt((1-x)(1-y)))**2``, clipped to [0, 1]. Vectorizes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = (np.sqrt(x * y) + np.sqrt((1.0 - x) * (1.0 - y))) ** 2
    v = np.clip(v, 0.0, 1.0)
    return float(v) if v.ndim == 0 else v


def f_minus(x, y):
    """``(sqrt(xy) - sqrt((1-x)(1-y)))**2``, clipped to [0, 1].

    No regime gating; :func:`gated_lower` applies the ``x + y > 1`` rule.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = (np.sqrt(x * y) - np.sqrt((1.0 - x) * (1.0 - y))) ** 2
    v = np.clip(v, 0.0, 1.0)
    return float(v) if v.ndim == 0 else v


def gated_lower(x, y):
    """Pure-qudit lower bound: ``f_minus`` when ``x + y > 1``, else 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = np.where(x + y > 1.0, f_minus(x, y), 0.0)
    return float(v) if v.ndim == 0 else v


def classical_lower(x, y):
    v = np.maximum(0.0, np.asarray(x, dtype=float) + np.asarray(y, dtype=float) - 1.0)
    return float(v) if v.ndim == 0 else v


def classical_upper(x, y):
    v = np.minimum(1.0, 1.0 - np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)))
    return float(v) if v.ndim == 0 else v


def interval_arrays(x, y, model: Model):
    """Vectorized ``(lo, hi)`` of :func:`triangle_interval` over arrays."""
    if model is Model.PURE_QUDIT:
        return gated_lower(x, y), f_plus(x, y)
    if model is Model.QUBIT:
        return f_minus(x, y), f_plus(x, y)
    if model is Model.CLASSICAL:
        return classical_lower(x, y), classical_upper(x, y)
    raise ValueError(f"unknown model {model!r}")


def triangle_interval(r_ab: float, r_ac: float, model: Model) -> Interval:
    """Allowed range of ``r_BC`` given exact ``r_AB`` and ``r_AC``."""
    for name, v in (("r_ab", r_ab), ("r_ac", r_ac)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v!r} lies outside [0, 1]")
    lo, hi = interval_arrays(r_ab, r_ac, model)
    return _make(lo, hi)


def _make(lo: float, hi: float) -> Interval:
    # endpoints that coincide mathematically can cross by an ulp
    if lo > hi:
        if lo - hi > 1e-12:
            raise ArithmeticError(f"bound inversion [{lo!r}, {hi!r}]")
        lo = hi = 0.5 * (lo + hi)
    return Interval(lo, hi)


def _upper_at(x: float, y: float, model: Model) -> float:
    if model is Model.CLASSICAL:
        return classical_upper(x, y)
    return f_plus(x, y)


def triangle_interval_lifted(ix: Interval, iy: Interval, model: Model) -> Interval:
    """Union of :func:`triangle_interval` over every ``(x, y)`` in ``ix x iy``.

    The upper envelopes decrease with the distance between ``x`` and ``y``
    (angle distance for the quantum ones), so the maximum is 1 on overlapping
    ranges and otherwise sits at the closest pair of endpoints. The gated
    qudit lower bound and the classical lower bound are nondecreasing in both
    arguments, so their minimum is at ``(ix.lo, iy.lo)``. The qubit lower
    bound ``cos^2(b + c)`` is not monotone: it vanishes on ``x + y = 1`` and
    grows on both sides of that line.
    """
    if ix.is_exact and iy.is_exact:
        return triangle_interval(ix.lo, iy.lo, model)

    if ix.hi < iy.lo:
        hi = _upper_at(ix.hi, iy.lo, model)
    elif iy.hi < ix.lo:
        hi = _upper_at(ix.lo, iy.hi, model)
    else:
        hi = 1.0

    if model is Model.PURE_QUDIT:
        lo = gated_lower(ix.lo, iy.lo)
    elif model is Model.CLASSICAL:
        lo = classical_lower(ix.lo, iy.lo)
    elif model is Model.QUBIT:
        if ix.lo + iy.lo > 1.0:
            lo = f_minus(ix.lo, iy.lo)
        elif ix.hi + iy.hi < 1.0:
            lo = f_minus(ix.hi, iy.hi)
        else:
            lo = 0.0
    else:
        raise ValueError(f"unknown model {model!r}")
    return _make(lo, hi)
