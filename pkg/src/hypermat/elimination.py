"""Numeric residual evaluators for the two matrix elimination routes.

The first route expresses the Hadamard products of factor rows through a
Vandermonde system in the candidate eigenvalues and evaluates tautology
generators on them.  The second builds the resolution-of-identity linear
system in the n^2 eigenvalue monomials and forms Cramer-rule rational
residuals from its determinants.

Residuals are evaluated numerically at candidate points; no symbolic
polynomial objects are produced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_hypermatrix, vandermonde
from .errors import PreconditionError, ShapeMismatchError, SingularSystemError

__all__ = [
    "PowerStack",
    "RowProductTable",
    "hadamard_row_products",
    "mu_nu_generator_residual",
    "char_poly_2x2",
    "ParsevalSystem",
    "build_parseval_system",
    "uv_generator_residual",
]

SEPARATION_RTOL = 1e-8
PINV_CUTOFF = 1e-12


def _square(a):
    a = as_hypermatrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass
class PowerStack:
    """Matrix powers A^0 .. A^{n-1} stacked so entry trajectories are columns.

    ``powers[k]`` is A^k; ``stack(i, j)`` returns the length-n vector of the
    (i, j) entries across powers, whose first element is the identity entry.
    """

    a: np.ndarray
    powers: np.ndarray

    @classmethod
    def build(cls, a) -> "PowerStack":
        a = _square(a)
        n = a.shape[0]
        powers = np.empty((n, n, n), dtype=np.complex128)
        acc = np.eye(n, dtype=np.complex128)
        for k in range(n):
            powers[k] = acc
            acc = acc @ a
        return cls(a=a, powers=powers)

    def stack(self, i: int, j: int) -> np.ndarray:
        return self.powers[:, i, j].copy()


@dataclass
class RowProductTable:
    """Estimated Hadamard row products w[i, j] (length-n vectors) plus a flag
    recording whether the degenerate pseudoinverse path was taken."""

    values: np.ndarray
    degenerate: bool

    def __getitem__(self, ij):
        i, j = ij
        return self.values[i, j]


def _spectrum_separation(spectrum) -> float:
    n = len(spectrum)
    if n < 2:
        return np.inf
    diff = np.abs(spectrum[:, None] - spectrum[None, :])
    return float(diff[~np.eye(n, dtype=bool)].min())


def hadamard_row_products(a, spectrum, separation_rtol: float = SEPARATION_RTOL) -> RowProductTable:
    """Solve the Vandermonde systems mapping entry power-trajectories to the
    Hadamard products of left/right factor rows.

    With pairwise-distinct candidate eigenvalues the plain inverse is used;
    near-coincident spectra switch to the singular-value pseudoinverse and
    set the degeneracy flag.
    """
    a = _square(a)
    spectrum = as_hypermatrix(spectrum)
    n = a.shape[0]
    if spectrum.shape != (n,):
        raise ShapeMismatchError(
            f"spectrum must have length {n}, got shape {spectrum.shape}"
        )
    vm = vandermonde(spectrum)
    scale = max(float(np.abs(spectrum).max()), 1.0)
    degenerate = _spectrum_separation(spectrum) <= separation_rtol * scale
    if degenerate:
        solver = np.linalg.pinv(vm, rcond=PINV_CUTOFF)
    else:
        solver = np.linalg.inv(vm)
    stack = PowerStack.build(a)
    # stack.powers has shape (k, i, j); contract the power axis
    values = np.einsum("tk,kij->ijt", solver, stack.powers)
    return RowProductTable(values=values, degenerate=degenerate)


def mu_nu_generator_residual(a, spectrum, i: int, j: int, normalized: bool = False) -> np.ndarray:
    """Eigenvalue-ideal generator residual for the row pair (i, j).

    Evaluates the denominator-cleared tautology
    ``det(V)^2 * (w_ii o w_jj - w_ij o w_ji)`` on the row products solved
    from the candidate spectrum.  The orientation and clearing are chosen so
    that at n = 2 the two components equal the characteristic polynomial
    evaluated at spectrum[1] and spectrum[0] respectively.  The vector is
    zero (to tolerance) exactly when the candidate spectrum is consistent
    with the matrix on this generator; for i == j it vanishes identically.

    With ``normalized=True`` the result is divided by
    ``max(1, ||A||_F) ** (n * (n - 1))``, matching the joint scaling degree
    of the cleared polynomial so tolerances are scale free.
    """
    a = _square(a)
    n = a.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise PreconditionError(f"indices ({i}, {j}) out of range for n={n}")
    table = hadamard_row_products(a, spectrum)
    w = table.values
    det2 = np.linalg.det(vandermonde(as_hypermatrix(spectrum))) ** 2
    res = det2 * (w[i, i] * w[j, j] - w[i, j] * w[j, i])
    if normalized:
        res = res / max(1.0, float(np.linalg.norm(a))) ** (n * (n - 1))
    return res


def char_poly_2x2(a, lam) -> complex:
    """Characteristic polynomial of a 2 x 2 matrix at a point:
    lam^2 - tr(A) lam + det(A)."""
    a = _square(a)
    if a.shape != (2, 2):
        raise ShapeMismatchError(f"char_poly_2x2 needs a 2x2 matrix, got {a.shape}")
    lam = complex(lam)
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    return complex(lam * lam - tr * lam + det)


@dataclass
class ParsevalSystem:
    """Linear system F x = vec(A) in the n^2 eigenvalue monomials.

    Rows are indexed by the equation pair (i0, i1), columns by the monomial
    pair (j0, j1); with a biorthogonal candidate pair the true monomial
    vector x[n j0 + j1] = mu_{j0} conj(nu_{j1}) solves the system.
    """

    f: np.ndarray
    a_vec: np.ndarray
    n: int


def build_parseval_system(u, v, a) -> ParsevalSystem:
    """Assemble the resolution-of-identity system for candidate factors.

    ``F[(i0, i1), (j0, j1)] = u[i0, j0] * (sum_k conj(v[j0, k]) u[j1, k]) *
    conj(v[i1, j1])`` with rows flattened as n*i0 + i1 and columns as
    n*j0 + j1, so that F x = vec(A) holds at the true monomials.
    """
    u = _square(u)
    v = _square(v)
    a = _square(a)
    n = u.shape[0]
    if v.shape != (n, n) or a.shape != (n, n):
        raise ShapeMismatchError("u, v, a must share the same square shape")
    g = np.einsum("qk,pk->pq", u, np.conj(v))  # g[j0, j1] = sum_k conj(v[j0,k]) u[j1,k]
    f = np.einsum("ap,pq,bq->abpq", u, g, np.conj(v)).reshape(n * n, n * n)
    return ParsevalSystem(f=f, a_vec=a.reshape(-1).copy(), n=n)


def _replaced_slogdet(f, a_vec, k):
    fk = f.copy()
    fk[:, k] = a_vec
    return np.linalg.slogdet(fk)


def uv_generator_residual(ps: ParsevalSystem, i: int, j: int) -> complex:
    """Cramer-rule residual of the eigenvector-ideal generator for i < j.

    Computes ``[det(F_ii) det(F_jj) - det(F_ij) det(F_ji)] / det(F)^2``
    where F_k substitutes vec(A) into column k.  Determinant ratios are
    evaluated in log magnitude to avoid underflow of the tiny determinants
    this system produces.  Note that the system is structurally singular on
    the exactly-biorthogonal locus, where the ratio is a 0/0 form; see the
    package notes on this generator.
    """
    n = ps.n
    if not (0 <= i < j < n):
        raise PreconditionError(f"need 0 <= i < j < n, got ({i}, {j}) with n={n}")
    sgn, logdet = np.linalg.slogdet(ps.f)
    if not np.isfinite(logdet) or sgn == 0:
        raise SingularSystemError(
            "Parseval system matrix is singular", det_magnitude=0.0
        )
    terms = []
    for k1, k2 in (((n * i + i), (n * j + j)), ((n * i + j), (n * j + i))):
        s1, l1 = _replaced_slogdet(ps.f, ps.a_vec, k1)
        s2, l2 = _replaced_slogdet(ps.f, ps.a_vec, k2)
        terms.append(s1 * s2 * np.exp(l1 + l2 - 2.0 * logdet))
    value = (terms[0] - terms[1]) / (sgn * sgn)
    if not np.isfinite(value):
        raise SingularSystemError(
            "Cramer ratio overflowed; system is numerically singular",
            det_magnitude=float(np.exp(logdet)) if logdet < 700 else np.inf,
        )
    return complex(value)
