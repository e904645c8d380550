"""Argument checks shared by the estimator and the CLI."""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import numpy as np

FAMILIES = ("itkt", "cit")


def check_family(family) -> str:
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    return family


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def to_fraction(value) -> Fraction:
    """Exact conversion; floats are taken at their binary value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not parameter values")
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError("parameter values must be finite")
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {type(value).__name__} as a rational number")


def check_parameter_matrix(X, n_features: int):
    """Return ``X`` as a list of rows of Fractions with ``n_features`` columns."""
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError(f"expected a 2d array, got {X.ndim} dimension(s)")
        rows = X.tolist()
    else:
        rows = [list(r) for r in X]
    if not rows:
        raise ValueError("X has no rows")
    out = []
    for k, row in enumerate(rows):
        if len(row) != n_features:
            raise ValueError(f"row {k} has {len(row)} entries, expected {n_features}")
        out.append([to_fraction(v) for v in row])
    return out
