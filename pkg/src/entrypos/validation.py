"""Input validation helpers shared by every module.

The conventions follow scikit-learn's ``check_array`` family: each helper
takes loosely typed input, validates it, and returns a normalized object
(an ndarray or a tuple) or raises ``ValueError``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

__all__ = [
    "check_square",
    "check_hermitian",
    "check_exponents",
    "check_vector",
    "is_rational",
    "is_rational_array",
    "to_fraction",
    "check_random_state",
    "exponents_are_integral",
]

_HERMITIAN_RTOL = 1e-12


def is_rational(x) -> bool:
    """True for ints and Fractions (exact scalars), False for bools and floats."""
    return isinstance(x, Rational) and not isinstance(x, bool)


def is_rational_array(values) -> bool:
    arr = np.asarray(values, dtype=object).ravel()
    return arr.size > 0 and all(is_rational(v) for v in arr)


def to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if is_rational(x):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def check_random_state(seed) -> np.random.Generator:
    """Turn ``None``, an int, a ``SeedSequence`` or a ``Generator`` into a ``Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.RandomState):
        return np.random.default_rng(seed.randint(0, 2**63 - 1))
    return np.random.default_rng(seed)


def check_square(A, *, name: str = "A", allow_object: bool = False) -> np.ndarray:
    """Return ``A`` as a 2-D square array.

    Object arrays (e.g. of ``Fraction``) are kept as such when
    ``allow_object`` is set; otherwise the result is float or complex.
    """
    if allow_object and is_rational_array(A):
        arr = np.array(A, dtype=object)
    else:
        arr = np.asarray(A)
        if arr.dtype == object:
            try:
                arr = arr.astype(complex if _any_complex(arr) else float)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{name} has non-numeric entries") from exc
        elif not np.issubdtype(arr.dtype, np.complexfloating):
            arr = arr.astype(float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError(f"{name} must have dimension >= 1")
    if arr.dtype != object and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


def _any_complex(arr) -> bool:
    return any(isinstance(v, complex) for v in arr.ravel())


def check_hermitian(A, *, name: str = "A", allow_object: bool = False) -> np.ndarray:
    """Validate that ``A`` is Hermitian and return it.

    Float input with asymmetry at round-off level is symmetrized; anything
    larger is rejected. Real input stays real, so the field is carried by
    the dtype.
    """
    arr = check_square(A, name=name, allow_object=allow_object)
    if arr.dtype == object:
        if any(arr[i, j] != arr[j, i] for i in range(arr.shape[0]) for j in range(i)):
            raise ValueError(f"{name} is not symmetric")
        return arr
    scale = max(1.0, float(np.max(np.abs(arr))))
    skew = float(np.max(np.abs(arr - arr.conj().T)))
    if skew > _HERMITIAN_RTOL * scale:
        raise ValueError(f"{name} is not Hermitian (max |A - A*| = {skew:.3g})")
    if np.issubdtype(arr.dtype, np.complexfloating):
        if np.max(np.abs(arr.imag)) == 0.0:
            return np.ascontiguousarray(arr.real)
        return (arr + arr.conj().T) / 2
    return (arr + arr.T) / 2


def check_vector(u, *, name: str = "u", allow_object: bool = False) -> np.ndarray:
    if allow_object and is_rational_array(u):
        arr = np.array(u, dtype=object)
    else:
        arr = np.asarray(u)
        if not np.issubdtype(arr.dtype, np.complexfloating):
            arr = arr.astype(float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D vector")
    return arr


def _normalize_exponent(x):
    if is_rational(x):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else x
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("exponents must be finite")
    return int(x) if x.is_integer() else x


def check_exponents(n, *, integer: bool = False, name: str = "n") -> tuple:
    """Validate a strictly increasing exponent tuple.

    Integral values (including ``2.0``) are normalized to ``int`` so that
    exact arithmetic can be used downstream. With ``integer=True`` every
    entry must be a non-negative integer.
    """
    if np.isscalar(n):
        n = (n,)
    entries = tuple(_normalize_exponent(x) for x in n)
    if not entries:
        raise ValueError(f"{name} must be non-empty")
    if any(b <= a for a, b in zip(entries, entries[1:])):
        raise ValueError(f"{name} must be strictly increasing, got {entries}")
    if integer and not all(isinstance(x, Integral) and x >= 0 for x in entries):
        raise ValueError(f"{name} must consist of non-negative integers, got {entries}")
    return entries


def exponents_are_integral(n) -> bool:
    return all(isinstance(x, Integral) for x in n)
