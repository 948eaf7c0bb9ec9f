"""Dense complex hypermatrix primitives.

A hypermatrix is represented directly as a C-ordered ``numpy.ndarray`` of
``complex128``: the order is ``ndim``, the shape is ``shape``, and the flat
entry list (row-major, last index fastest) is ``ravel()``.  All indexing is
0-based.  Every function here is pure: inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatchError

__all__ = [
    "as_hypermatrix",
    "is_cubic",
    "hadamard",
    "cyclic_transpose",
    "kronecker_delta",
    "correlation_product",
    "entrywise_power",
    "vandermonde",
    "background_bilinear_form",
    "roots_of_unity",
]


def as_hypermatrix(data) -> np.ndarray:
    """Coerce input to a C-ordered complex128 array without copying when possible."""
    a = np.asarray(data, dtype=np.complex128, order="C")
    if a.ndim < 1:
        a = a.reshape(1)
    return a


def is_cubic(a) -> bool:
    """True when all sides of the hypermatrix are equal."""
    a = np.asarray(a)
    return len(set(a.shape)) <= 1


def hadamard(a, b) -> np.ndarray:
    """Entrywise product of two same-shape hypermatrices."""
    a = as_hypermatrix(a)
    b = as_hypermatrix(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(
            f"hadamard requires equal shapes, got {a.shape} and {b.shape}"
        )
    return a * b


def cyclic_transpose(a, reps: int = 1) -> np.ndarray:
    """Rotate the index tuple of a hypermatrix.

    One application maps ``result[i2, ..., im, i1] = a[i1, i2, ..., im]``:
    the first index moves last.  At order 2 this is the ordinary matrix
    transpose, and ``order`` applications are the identity.  ``reps`` may be
    negative to rotate the opposite way (the convention flip exposed for
    experimentation; the two directions are inverse permutations).
    """
    a = as_hypermatrix(a)
    m = a.ndim
    r = reps % m
    if r == 0:
        return a.copy()
    axes = tuple(range(r, m)) + tuple(range(r))
    return np.ascontiguousarray(np.transpose(a, axes))


def kronecker_delta(order: int, side: int) -> np.ndarray:
    """Cubic hypermatrix with ones exactly where all indices coincide.

    At order 2 this is the identity matrix.
    """
    if order < 2:
        raise ShapeMismatchError(f"kronecker_delta needs order >= 2, got {order}")
    if side < 1:
        raise ShapeMismatchError(f"kronecker_delta needs side >= 1, got {side}")
    out = np.zeros((side,) * order, dtype=np.complex128)
    idx = np.arange(side)
    out[(idx,) * order] = 1.0
    return out


def correlation_product(vectors) -> complex:
    """Sum over positions of the entrywise product of a list of vectors.

    Equals the inner product of the all-ones vector with the Hadamard
    product of the arguments.  No conjugation is applied.
    """
    vs = [as_hypermatrix(v) for v in vectors]
    if not vs:
        raise ShapeMismatchError("correlation_product needs at least one vector")
    n = vs[0].shape
    for k, v in enumerate(vs):
        if v.ndim != 1 or v.shape != n:
            raise ShapeMismatchError(
                f"vector {k} has shape {v.shape}, expected {n}"
            )
    return complex(np.prod(np.stack(vs), axis=0).sum())


def entrywise_power(v, alpha: int) -> np.ndarray:
    """Raise each entry of a vector to the integer power ``alpha``.

    Negative powers require all entries nonzero.
    """
    v = as_hypermatrix(v)
    if alpha < 0 and np.any(v == 0):
        raise ShapeMismatchError("negative entrywise power of a vector with zero entries")
    if alpha == 0:
        return np.ones_like(v)
    return v ** alpha


def vandermonde(v) -> np.ndarray:
    """n x n matrix with ``result[i, j] = v[j] ** i``; row 0 is all ones."""
    v = as_hypermatrix(v)
    if v.ndim != 1:
        raise ShapeMismatchError("vandermonde expects a vector")
    n = v.shape[0]
    return v[None, :] ** np.arange(n)[:, None]


def background_bilinear_form(a, b, m) -> complex:
    """Bilinear form sum_{k0,k1} a[k0] * m[k0,k1] * b[k1] (no conjugation)."""
    a = as_hypermatrix(a)
    b = as_hypermatrix(b)
    m = as_hypermatrix(m)
    if m.ndim != 2 or a.ndim != 1 or b.ndim != 1:
        raise ShapeMismatchError("background_bilinear_form expects (vector, vector, matrix)")
    if m.shape != (a.shape[0], b.shape[0]):
        raise ShapeMismatchError(
            f"matrix shape {m.shape} incompatible with vectors {a.shape[0]}, {b.shape[0]}"
        )
    return complex(a @ m @ b)


def roots_of_unity(n: int) -> np.ndarray:
    """Vector of the n-th roots of unity, exp(2 pi i j / n) for j < n.

    Provided for completeness only; nothing else in the package consumes it.
    """
    if n < 1:
        raise ShapeMismatchError("roots_of_unity needs n >= 1")
    return np.exp(2j * np.pi * np.arange(n) / n)
