"""Fourth-order Hermicity, slice-invariant scaling checks, multilinear
forms, and the fourth-power eigenvalue bounds.

An even-order hypermatrix is Hermitian when it equals the conjugate of its
cyclic transpose.  Fourth-order factor hypermatrices store their fiber
vectors along the last axis: the fiber labelled (a, b, c) is ``Q[a, b, c, :]``.

Two entry conventions appear in the fourth-order decomposition displays: the
entrywise reconstruction carries each scaling vector three times per slot
(the cubed convention), while the summed multilinear form carries it once.
Builders take an explicit flag so either convention can be produced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import as_hypermatrix, cyclic_transpose, is_cubic, kronecker_delta
from .errors import PreconditionError, ShapeMismatchError

__all__ = [
    "ScalingHypermatrix4",
    "SliceInvariantScaling",
    "is_hermitian",
    "hermitian_symmetrize",
    "multilinear_form",
    "theorem_realness_check",
    "BoundsResult",
    "rayleigh_bounds",
    "unitarity_residual",
    "unitary_reconstruction_residual",
    "delta_fiber_factor",
    "build_slice_invariant_hermitian",
]

PATTERNS = ("P1", "P2", "P3")


@dataclass
class ScalingHypermatrix4:
    """Fourth-order diagonal-analog scaling hypermatrix.

    ``param`` is an n x n value matrix and ``pattern`` selects which index
    pair the Kronecker delta couples:

    - P1: entry (i0, i1, i2, i3) = delta(i1, i2) * param[i1, i3]
    - P2: entry (i0, i1, i2, i3) = delta(i1, i3) * param[i1, i0]
    - P3: entry (i0, i1, i2, i3) = delta(i1, i0) * param[i1, i2]

    All three patterns are exposed uniformly for each scaling label.
    """

    param: np.ndarray
    pattern: str

    def __post_init__(self):
        p = as_hypermatrix(self.param)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ShapeMismatchError(f"param must be square, got shape {p.shape}")
        if self.pattern not in PATTERNS:
            raise PreconditionError(f"pattern must be one of {PATTERNS}, got {self.pattern!r}")
        object.__setattr__(self, "param", p)

    def materialize(self) -> np.ndarray:
        n = self.param.shape[0]
        out = np.zeros((n,) * 4, dtype=np.complex128)
        for i0, i1, i2, i3 in itertools.product(range(n), repeat=4):
            if self.pattern == "P1":
                out[i0, i1, i2, i3] = (i1 == i2) * self.param[i1, i3]
            elif self.pattern == "P2":
                out[i0, i1, i2, i3] = (i1 == i3) * self.param[i1, i0]
            else:
                out[i0, i1, i2, i3] = (i1 == i0) * self.param[i1, i2]
        return out


@dataclass
class SliceInvariantScaling:
    """One shared scaling vector per label, the slice-invariant case."""

    lam: np.ndarray
    gam: np.ndarray
    the: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        vs = [as_hypermatrix(v) for v in (self.lam, self.gam, self.the, self.xi)]
        n = vs[0].shape
        for v in vs:
            if v.ndim != 1 or v.shape != n:
                raise ShapeMismatchError("scaling vectors must share one length")
        object.__setattr__(self, "lam", vs[0])
        object.__setattr__(self, "gam", vs[1])
        object.__setattr__(self, "the", vs[2])
        object.__setattr__(self, "xi", vs[3])


def is_hermitian(a, tol: float = 1e-12):
    """Check conj(cyclic_transpose(A)) == A for an even-order cubic input.

    Returns (bool, residual) with the Frobenius-norm residual.
    """
    a = as_hypermatrix(a)
    if a.ndim % 2 != 0:
        raise PreconditionError(f"Hermicity is defined for even order, got order {a.ndim}")
    if not is_cubic(a):
        raise ShapeMismatchError(f"Hermicity check needs a cubic input, got shape {a.shape}")
    residual = float(np.linalg.norm(np.conj(cyclic_transpose(a)) - a))
    return residual <= tol, residual


def hermitian_symmetrize(x) -> np.ndarray:
    """Average an even-order cubic hypermatrix over its conjugate-transpose
    orbit; the result is Hermitian by construction."""
    x = as_hypermatrix(x)
    if x.ndim % 2 != 0 or not is_cubic(x):
        raise ShapeMismatchError("symmetrization needs an even-order cubic input")
    term = x
    acc = np.zeros_like(x)
    for _ in range(x.ndim):
        acc += term
        term = np.conj(cyclic_transpose(term))
    return acc / x.ndim


def multilinear_form(a, x, y, z, t) -> complex:
    """sum a[i0,i1,i2,i3] x[i0] conj(y[i1]) z[i2] conj(t[i3])."""
    a = as_hypermatrix(a)
    if a.ndim != 4 or not is_cubic(a):
        raise ShapeMismatchError(f"multilinear form needs a cubic order-4 input, got {a.shape}")
    n = a.shape[0]
    vs = [as_hypermatrix(v) for v in (x, y, z, t)]
    for v in vs:
        if v.shape != (n,):
            raise ShapeMismatchError(f"vector of shape {v.shape} incompatible with side {n}")
    return complex(np.einsum(
        "abcd,a,b,c,d->", a, vs[0], np.conj(vs[1]), vs[2], np.conj(vs[3])
    ))


def theorem_realness_check(s: SliceInvariantScaling, tol: float = 1e-10):
    """Check the realness consequence for slice-invariant scalings.

    Computes lam o conj(gam) o the o conj(xi) and reports the largest
    imaginary part, which vanishes for scalings extracted from a Hermitian
    slice-invariant decomposition.
    """
    prod = s.lam * np.conj(s.gam) * s.the * np.conj(s.xi)
    max_imag = float(np.abs(prod.imag).max())
    return max_imag <= tol, max_imag


@dataclass
class BoundsResult:
    lower: float
    value: float
    upper: float
    holds: bool


def rayleigh_bounds(a, x, mu: float, nu: float) -> BoundsResult:
    """Fourth-power bounds mu^4 ||x||_4^4 <= <x,x,x,x>_A <= nu^4 ||x||_4^4.

    The form value is evaluated and compared; the hypothesis that the
    scaling entries of A lie in [mu, nu] is the caller's responsibility.
    """
    if not (0 < mu <= nu):
        raise PreconditionError(f"need 0 < mu <= nu, got mu={mu}, nu={nu}")
    x = as_hypermatrix(x)
    l4 = float((np.abs(x) ** 4).sum())
    value = float(np.real(multilinear_form(a, x, x, x, x)))
    lower = mu ** 4 * l4
    upper = nu ** 4 * l4
    return BoundsResult(lower=lower, value=value, upper=upper,
                        holds=bool(lower <= value <= upper))


def _fibers(q4):
    q4 = as_hypermatrix(q4)
    if q4.ndim != 4 or not is_cubic(q4):
        raise ShapeMismatchError(
            f"factor must be order 4 with the fiber axis last, got shape {q4.shape}"
        )
    return q4


def unitarity_residual(q4) -> float:
    """Worst-case deviation of the fourth-order unitarity constraints.

    For every index tuple the correlation of the four fibers
    q[i0,i2,i3], conj(q[i1,i3,i0]), q[i2,i0,i1], conj(q[i3,i1,i2]) must
    equal the Kronecker delta of the tuple.
    """
    q4 = _fibers(q4)
    n = q4.shape[0]
    worst = 0.0
    for i0, i1, i2, i3 in itertools.product(range(n), repeat=4):
        val = (
            q4[i0, i2, i3] * np.conj(q4[i1, i3, i0])
            * q4[i2, i0, i1] * np.conj(q4[i3, i1, i2])
        ).sum()
        target = 1.0 if i0 == i1 == i2 == i3 else 0.0
        worst = max(worst, abs(val - target))
    return float(worst)


def unitary_reconstruction_residual(a, q4, lam, gam, the, xi) -> float:
    """Worst-case deviation of the entrywise unitary reconstruction.

    Scalings are n x n matrices whose rows are the per-slice vectors; the
    entry (i0, i1, i2, i3) must equal the correlation of the scaled fibers
    with each scaling vector appearing three times (the entrywise, cubed
    convention).
    """
    a = as_hypermatrix(a)
    q4 = _fibers(q4)
    n = q4.shape[0]
    if a.shape != (n,) * 4:
        raise ShapeMismatchError(f"target shape {a.shape} does not match factor side {n}")
    mats = []
    for name, m in (("lam", lam), ("gam", gam), ("the", the), ("xi", xi)):
        m = as_hypermatrix(m)
        if m.shape != (n, n):
            raise ShapeMismatchError(f"{name} must be {n} x {n}, got {m.shape}")
        mats.append(m)
    lam, gam, the, xi = mats
    worst = 0.0
    for i0, i1, i2, i3 in itertools.product(range(n), repeat=4):
        term = (
            (lam[i0] * lam[i2] * lam[i3]) * q4[i0, i2, i3]
            * np.conj((gam[i1] * gam[i0] * gam[i3]) * q4[i1, i3, i0])
            * (the[i2] * the[i0] * the[i1]) * q4[i2, i0, i1]
            * np.conj((xi[i3] * xi[i1] * xi[i2]) * q4[i3, i1, i2])
        ).sum()
        worst = max(worst, abs(term - a[i0, i1, i2, i3]))
    return float(worst)


def delta_fiber_factor(n: int) -> np.ndarray:
    """Canonical unitary factor with fibers q[a, b, c] = e_a."""
    q4 = np.zeros((n,) * 4, dtype=np.complex128)
    for a, b, c in itertools.product(range(n), repeat=3):
        q4[a, b, c, a] = 1.0
    return q4


def build_slice_invariant_hermitian(lam, gam, the, xi, entrywise_convention: bool = False) -> np.ndarray:
    """Diagonal fourth-order hypermatrix of a slice-invariant decomposition.

    With the canonical delta-fiber unitary factor the reconstruction is
    diagonal with entries lam_i conj(gam_i) the_i conj(xi_i); under the
    entrywise (cubed) convention each diagonal entry is that product cubed.
    The result is Hermitian exactly when the products are real.
    """
    s = SliceInvariantScaling(lam=lam, gam=gam, the=the, xi=xi)
    d = s.lam * np.conj(s.gam) * s.the * np.conj(s.xi)
    if entrywise_convention:
        d = d ** 3
    n = d.shape[0]
    out = kronecker_delta(4, n)
    idx = np.arange(n)
    out[idx, idx, idx, idx] = d
    return out
