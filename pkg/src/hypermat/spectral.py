"""Matrix spectral machinery: eigenpairs, minor partitions, lift, truncation
and inflation approximations, and the recursive driver.

A spectral pair factors A = (U diag mu) (V diag nu)^dagger with U V^dagger
= I.  The canonical eigenvalue split puts the whole eigenvalue in mu and
sets nu to ones, which makes pairs unique up to eigenvector scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_hypermatrix
from .errors import (
    ConditioningError,
    DefectiveMatrixError,
    LiftError,
    PreconditionError,
    ShapeMismatchError,
)

__all__ = [
    "ResidualReport",
    "SpectralPair",
    "LiftedPair",
    "TruncationResult",
    "InflationOptions",
    "InflationResult",
    "ApproximationResult",
    "eigen_decompose",
    "pair_minor",
    "tau_minor",
    "decompose_tau_minor",
    "decompose_pair_minor",
    "lift",
    "lift_pair_minors",
    "permute_columns",
    "truncate",
    "inflate",
    "recursive_approximate",
]

BIORTHOGONALITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
EIGVEC_COND_WARN = 1e8


@dataclass
class ResidualReport:
    """Named residual magnitudes produced by a verification operation."""

    values: dict

    def __getitem__(self, name):
        return self.values[name]

    def max(self) -> float:
        return max(self.values.values()) if self.values else 0.0

    def passes(self, tolerances) -> bool:
        return all(self.values[k] <= tol for k, tol in tolerances.items())

    def __str__(self):
        inner = ", ".join(f"{k}={v:.3e}" for k, v in self.values.items())
        return f"ResidualReport({inner})"


def _square(a):
    a = as_hypermatrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass
class SpectralPair:
    """Factors (U, V, mu, nu) with U V^dagger = I."""

    u: np.ndarray
    v: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    eigvec_cond: float = float("nan")

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.mu * np.conj(self.nu)

    @property
    def ill_conditioned(self) -> bool:
        return bool(np.isfinite(self.eigvec_cond) and self.eigvec_cond > EIGVEC_COND_WARN)

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.mu) @ (self.v * self.nu).conj().T

    def biorthogonality_residual(self) -> float:
        n = self.u.shape[0]
        return float(np.linalg.norm(self.u @ self.v.conj().T - np.eye(n)))

    def reconstruction_residual(self, a) -> float:
        a = _square(a)
        scale = max(np.linalg.norm(a), 1e-300)
        return float(np.linalg.norm(self.reconstruct() - a) / scale)

    def residual_report(self, a) -> ResidualReport:
        return ResidualReport({
            "reconstruction": self.reconstruction_residual(a),
            "biorthogonality": self.biorthogonality_residual(),
        })


def eigen_decompose(a) -> SpectralPair:
    """Spectral pair of a diagonalizable matrix.

    Eigenvalues are sorted by descending magnitude, then descending real
    part, then descending imaginary part.  Column normalization: V columns
    have unit norm and U is fixed by U = (V^dagger)^{-1}, so biorthogonality
    holds by construction.  A condition estimate of the eigenvector basis is
    attached; values above 1e8 flag the pair as ill conditioned.
    """
    a = _square(a)
    try:
        w, p = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise DefectiveMatrixError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    w = w[order]
    p = p[:, order]
    cond = float(np.linalg.cond(p))
    try:
        pinv = np.linalg.inv(p)
    except np.linalg.LinAlgError as exc:
        raise DefectiveMatrixError(
            f"eigenvector basis is numerically singular (cond ~ {cond:.2e})"
        ) from exc
    y = pinv.conj().T
    s = np.linalg.norm(y, axis=0)
    s[s == 0] = 1.0
    v = y / s
    u = p * s
    return SpectralPair(u=u, v=v, mu=w, nu=np.ones_like(w), eigvec_cond=cond)


# ----------------------------------------------------------------- minors


def pair_minor(a, j1: int, j2: int) -> np.ndarray:
    """Mask a matrix to the two entries (j1, j2) and (j2, j1)."""
    a = _square(a)
    n = a.shape[0]
    if not (0 <= j1 < j2 < n):
        raise PreconditionError(
            f"pair_minor needs 0 <= j1 < j2 < n, got j1={j1}, j2={j2}, n={n}"
        )
    out = np.zeros_like(a)
    out[j1, j2] = a[j1, j2]
    out[j2, j1] = a[j2, j1]
    return out


def tau_minor(a, tau: int) -> np.ndarray:
    """Weighted single-vertex minor; the n minors sum back to the matrix.

    Off-diagonal entries avoiding tau are kept with weight 1/(n-2), diagonal
    entries avoiding tau with weight 1/(n-1), and row/column tau is zeroed.
    """
    a = _square(a)
    n = a.shape[0]
    if n < 3:
        raise PreconditionError(f"tau_minor requires n >= 3, got n={n}")
    if not (0 <= tau < n):
        raise PreconditionError(f"tau index {tau} out of range for n={n}")
    keep = np.ones(n, dtype=bool)
    keep[tau] = False
    w = np.outer(keep, keep).astype(np.float64) / (n - 2)
    d = np.where(keep, 1.0 / (n - 1), 0.0)
    np.fill_diagonal(w, d)
    return a * w


def _embed_pair(sub: SpectralPair, n: int, rows, zero_slots: int) -> SpectralPair:
    """Embed a smaller pair on the given row subset, padding zero columns.

    The embedded pair satisfies U V^dagger = sum of e_r e_r^T over the kept
    rows, the deficient biorthogonality the lift construction requires.
    """
    k = sub.u.shape[1]
    u = np.zeros((n, n), dtype=np.complex128)
    v = np.zeros((n, n), dtype=np.complex128)
    u[np.ix_(rows, range(k))] = sub.u
    v[np.ix_(rows, range(k))] = sub.v
    mu = np.zeros(n, dtype=np.complex128)
    nu = np.zeros(n, dtype=np.complex128)
    mu[:k] = sub.mu
    nu[:k] = sub.nu
    return SpectralPair(u=u, v=v, mu=mu, nu=nu, eigvec_cond=sub.eigvec_cond)


def decompose_tau_minor(a, tau: int) -> SpectralPair:
    """Spectral pair of a tau minor with U V^dagger = I - e_tau e_tau^T.

    The active (n-1) x (n-1) block is decomposed and embedded with a zero
    column in the tau slot, so the rank deficiency demanded by the lift is
    exact by construction.
    """
    a = _square(a)
    n = a.shape[0]
    m = tau_minor(a, tau)
    rows = [i for i in range(n) if i != tau]
    sub = eigen_decompose(m[np.ix_(rows, rows)])
    return _embed_pair(sub, n, rows, zero_slots=1)


def decompose_pair_minor(a, j1: int, j2: int) -> SpectralPair:
    """Spectral pair of a pair minor with U V^dagger = e_j1 e_j1^T + e_j2 e_j2^T."""
    a = _square(a)
    n = a.shape[0]
    m = pair_minor(a, j1, j2)
    rows = [j1, j2]
    block = m[np.ix_(rows, rows)]
    if np.all(block == 0):
        # zero minor: zero factors with the required support
        sub = SpectralPair(
            u=np.eye(2, dtype=np.complex128),
            v=np.eye(2, dtype=np.complex128),
            mu=np.zeros(2, dtype=np.complex128),
            nu=np.zeros(2, dtype=np.complex128),
        )
    else:
        sub = eigen_decompose(block)
    return _embed_pair(sub, n, rows, zero_slots=n - 2)


# ------------------------------------------------------------------- lift


@dataclass
class LiftedPair:
    """An N x N biorthogonal pair whose top-left block reconstructs the
    original matrix; N is n^2 for the tau-minor lift."""

    big_u: np.ndarray
    big_v: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    block_size: int

    @property
    def size(self) -> int:
        return self.big_u.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.big_u * (self.mu * np.conj(self.nu))) @ self.big_v.conj().T

    def top_left_block(self) -> np.ndarray:
        n = self.block_size
        return self.reconstruct()[:n, :n]

    def biorthogonality_residual(self) -> float:
        return float(np.linalg.norm(
            self.big_u @ self.big_v.conj().T - np.eye(self.size)
        ))


def _complete_biorthogonal(ru, rv, rank_rtol=1e-8):
    """Extend leading row blocks (ru, rv) to square biorthogonal factors.

    Rows added to the U side form an orthonormal basis of the orthogonal
    complement of the rows of rv (so X rv^dagger = 0 exactly up to the SVD);
    the matching V-side rows are obtained by a single linear solve, which
    makes the full product the identity to machine precision.
    """
    n, nn = ru.shape
    sv = np.linalg.svd(np.conj(rv), compute_uv=False)
    rank = int((sv > rank_rtol * sv[0]).sum()) if sv[0] > 0 else 0
    if rank < n:
        raise LiftError(
            f"leading rows are rank deficient: numerical rank {rank} < {n}",
            rank=rank,
        )
    _, _, wh = np.linalg.svd(np.conj(rv), full_matrices=True)
    x = wh[n:, :].conj()
    k = np.vstack([ru, x])
    e = np.zeros((nn, nn - n), dtype=np.complex128)
    e[n:, :] = np.eye(nn - n)
    try:
        z = np.linalg.solve(k, e)
    except np.linalg.LinAlgError as exc:
        raise LiftError(f"completion solve failed: {exc}", rank=rank) from exc
    y = z.conj().T
    return k, np.vstack([rv, y])


def lift(minor_pairs, n: int) -> LiftedPair:
    """Concatenate the n tau-minor pairs into an n^2-sized biorthogonal pair.

    Column tau*n + t holds the t-th factor column of minor tau scaled by
    1/sqrt(n-1); the scaling entries absorb the matching sqrt(n-1).  Rows
    beyond the first n are produced by the biorthogonal completion.
    """
    minor_pairs = list(minor_pairs)
    if len(minor_pairs) != n:
        raise ShapeMismatchError(f"expected {n} minor pairs, got {len(minor_pairs)}")
    nn = n * n
    ru = np.zeros((n, nn), dtype=np.complex128)
    rv = np.zeros((n, nn), dtype=np.complex128)
    mu = np.zeros(nn, dtype=np.complex128)
    nu = np.zeros(nn, dtype=np.complex128)
    s = np.sqrt(n - 1)
    for t, pair in enumerate(minor_pairs):
        if pair.u.shape != (n, n):
            raise ShapeMismatchError(
                f"minor pair {t} has factor shape {pair.u.shape}, expected {(n, n)}"
            )
        cols = slice(t * n, (t + 1) * n)
        ru[:, cols] = pair.u / s
        rv[:, cols] = pair.v / s
        mu[cols] = s * pair.mu
        nu[cols] = s * pair.nu
    big_u, big_v = _complete_biorthogonal(ru, rv)
    return LiftedPair(big_u=big_u, big_v=big_v, mu=mu, nu=nu, block_size=n)


def lift_pair_minors(minor_pairs, n: int) -> LiftedPair:
    """Pair-minor variant of the lift, sized n * C(n, 2).

    Intended for hollow matrices, whose pair minors sum back to the matrix
    exactly.  ``minor_pairs`` iterates over (j1, j2) in lexicographic order.
    """
    minor_pairs = list(minor_pairs)
    expected = n * (n - 1) // 2
    if len(minor_pairs) != expected:
        raise ShapeMismatchError(
            f"expected {expected} pair minors for n={n}, got {len(minor_pairs)}"
        )
    nn = n * expected
    ru = np.zeros((n, nn), dtype=np.complex128)
    rv = np.zeros((n, nn), dtype=np.complex128)
    mu = np.zeros(nn, dtype=np.complex128)
    nu = np.zeros(nn, dtype=np.complex128)
    s = np.sqrt(n - 1)
    for t, pair in enumerate(minor_pairs):
        cols = slice(t * n, (t + 1) * n)
        ru[:, cols] = pair.u / s
        rv[:, cols] = pair.v / s
        mu[cols] = s * pair.mu
        nu[cols] = s * pair.nu
    big_u, big_v = _complete_biorthogonal(ru, rv)
    return LiftedPair(big_u=big_u, big_v=big_v, mu=mu, nu=nu, block_size=n)


def permute_columns(lp: LiftedPair, order) -> LiftedPair:
    """Apply one column permutation to both factors; biorthogonality is
    preserved exactly."""
    order = np.asarray(order)
    return LiftedPair(
        big_u=lp.big_u[:, order],
        big_v=lp.big_v[:, order],
        mu=lp.mu[order],
        nu=lp.nu[order],
        block_size=lp.block_size,
    )


# -------------------------------------------------------------- truncation


@dataclass
class TruncationResult:
    """Truncated block approximation plus the two-term error value.

    ``error_squared`` is the sum of the tail-column term and the masked
    head-column term; ``error`` is its square root.  The two individual
    terms are retained for diagnostics.
    """

    matrix: np.ndarray
    error_squared: float
    error: float
    tail_term_squared: float
    coupling_term_squared: float


def truncate(lp: LiftedPair) -> TruncationResult:
    """Project the first ``block_size`` columns onto the leading coordinates.

    The approximation uses the k-th columns of both factors for k < n with
    their tails zeroed.  The reported error value is the two-term formula:
    the squared Frobenius norm of the discarded columns' reconstruction plus
    the squared norm of the kept columns' tail-masked reconstruction.
    """
    n = lp.block_size
    nn = lp.size
    d = lp.mu * np.conj(lp.nu)
    a_tilde = (lp.big_u[:n, :n] * d[:n]) @ lp.big_v[:n, :n].conj().T
    tail = (lp.big_u[:, n:] * d[n:]) @ lp.big_v[:, n:].conj().T
    gu = lp.big_u[:, :n].copy()
    gv = lp.big_v[:, :n].copy()
    gu[:n, :] = 0.0
    gv[:n, :] = 0.0
    coupling = (gu * d[:n]) @ gv.conj().T
    t1 = float(np.linalg.norm(tail) ** 2)
    t2 = float(np.linalg.norm(coupling) ** 2)
    total = t1 + t2
    return TruncationResult(
        matrix=a_tilde,
        error_squared=total,
        error=float(np.sqrt(total)),
        tail_term_squared=t1,
        coupling_term_squared=t2,
    )


# --------------------------------------------------------------- inflation


@dataclass
class InflationOptions:
    max_iterations: int = 5000
    objective_tol: float = 1e-12
    relative_decrease_tol: float = 1e-10
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0
    max_backtracks: int = 60
    cond_limit: float = 1e8
    coupling_weight: float = 1.0
    reconstruction_weight: float = 1.0


@dataclass
class InflationResult:
    pair: SpectralPair
    converged: bool
    iterations: int
    objective_trace: np.ndarray
    final_objective: float
    transformed: LiftedPair

    @property
    def objective_monotone(self) -> bool:
        t = self.objective_trace
        return bool(np.all(np.diff(t) <= 1e-15 * np.maximum(t[:-1], 1.0)))


def _inflation_state(lp, w, masks):
    p, q, e = masks
    x = np.linalg.inv(w.conj().T)
    u = lp.big_u @ w
    v = lp.big_v @ x
    return x, u, v


def _inflation_objective_grad(lp, w, masks, weights):
    """Objective and Wirtinger gradient wrt conj(W) of the block-diagonal
    drive, with the factor transform (U W, V (W^dagger)^{-1})."""
    p, q, e = masks
    wc, wr = weights
    d = lp.mu * np.conj(lp.nu)
    x = np.linalg.inv(w.conj().T)
    u = lp.big_u @ w
    v = lp.big_v @ x
    k = np.linalg.solve(w, lp.big_v.conj().T)
    r = (u * d) @ k
    z = q * r - e
    f = float(
        wc * ((np.abs(p * u) ** 2).sum() + (np.abs(p * v) ** 2).sum())
        + wr * (np.abs(z) ** 2).sum()
    )
    g1 = lp.big_u.conj().T @ (p * u)
    gx = lp.big_v.conj().T @ (p * v)
    g2 = -x @ gx.conj().T @ x
    vx = lp.big_v @ x
    core = lp.big_u.conj().T @ z @ vx
    g3 = core * np.conj(d)[None, :] - (x * np.conj(d)[None, :]) @ w.conj().T @ core
    return f, wc * (g1 + g2) + wr * g3


def _inflation_objective(lp, w, masks, weights):
    p, q, e = masks
    wc, wr = weights
    d = lp.mu * np.conj(lp.nu)
    x = np.linalg.inv(w.conj().T)
    u = lp.big_u @ w
    v = lp.big_v @ x
    k = np.linalg.solve(w, lp.big_v.conj().T)
    z = q * ((u * d) @ k) - e
    return float(
        wc * ((np.abs(p * u) ** 2).sum() + (np.abs(p * v) ** 2).sum())
        + wr * (np.abs(z) ** 2).sum()
    )


def inflate(lp: LiftedPair, opts: InflationOptions | None = None) -> InflationResult:
    """Gradient-descent drive of a lifted pair toward block-diagonal factors.

    The optimization variable is an invertible change of basis W acting as
    big_U <- big_U W, big_V <- big_V (W^{-1})^dagger, which preserves the
    biorthogonality product exactly.  The objective is the squared coupling
    mass of both factors plus the deviation of the bottom-right
    reconstruction block from the identity.  Steps use Armijo backtracking,
    so the objective is non-increasing per accepted step.
    """
    opts = opts or InflationOptions()
    n = lp.block_size
    nn = lp.size
    p = np.zeros((nn, nn))
    p[:n, n:] = 1.0
    p[n:, :n] = 1.0
    q = np.zeros((nn, nn))
    q[n:, n:] = 1.0
    e = np.zeros((nn, nn), dtype=np.complex128)
    e[n:, n:] = np.eye(nn - n)
    masks = (p, q, e)
    weights = (opts.coupling_weight, opts.reconstruction_weight)

    w = np.eye(nn, dtype=np.complex128)
    f, grad = _inflation_objective_grad(lp, w, masks, weights)
    trace = [f]
    converged = f < opts.objective_tol
    iterations = 0
    while not converged and iterations < opts.max_iterations:
        gnorm2 = float((np.abs(grad) ** 2).sum())
        if gnorm2 == 0.0:
            converged = True
            break
        step = opts.initial_step
        accepted = False
        for _ in range(opts.max_backtracks):
            w_try = w - step * grad
            try:
                f_try = _inflation_objective(lp, w_try, masks, weights)
            except np.linalg.LinAlgError:
                step *= opts.backtrack_factor
                continue
            if f_try <= f - opts.armijo_c * step * gnorm2:
                accepted = True
                break
            step *= opts.backtrack_factor
        if not accepted:
            break
        if np.linalg.cond(w_try) > opts.cond_limit:
            raise ConditioningError(
                f"inflation transform condition exceeded {opts.cond_limit:.1e}"
            )
        prev = f
        w = w_try
        f, grad = _inflation_objective_grad(lp, w, masks, weights)
        trace.append(f)
        iterations += 1
        if f < opts.objective_tol:
            converged = True
        elif prev > 0 and (prev - f) / prev < opts.relative_decrease_tol:
            converged = True

    x = np.linalg.inv(w.conj().T)
    transformed = LiftedPair(
        big_u=lp.big_u @ w,
        big_v=lp.big_v @ x,
        mu=lp.mu.copy(),
        nu=lp.nu.copy(),
        block_size=n,
    )
    pair = SpectralPair(
        u=transformed.big_u[:n, :n].copy(),
        v=transformed.big_v[:n, :n].copy(),
        mu=transformed.mu[:n].copy(),
        nu=transformed.nu[:n].copy(),
    )
    return InflationResult(
        pair=pair,
        converged=converged,
        iterations=iterations,
        objective_trace=np.array(trace),
        final_objective=f,
        transformed=transformed,
    )


# ---------------------------------------------------------------- recursion


@dataclass
class ApproximationResult:
    pair: SpectralPair
    report: ResidualReport
    method: str
    depth_floor: int


def _extract_dominant_pair(lp: LiftedPair, cond_limit=1e10) -> SpectralPair:
    """Eigen-style extraction from the n dominant lifted directions.

    Columns are ranked by eigenvalue magnitude; the head blocks of the
    dominant columns give U' and the V factor is re-derived from U' so the
    returned pair is exactly biorthogonal and decomposes its own
    reconstruction exactly.
    """
    n = lp.block_size
    weight = np.abs(lp.mu * np.conj(lp.nu))
    order = np.argsort(-weight, kind="stable")
    lp = permute_columns(lp, order)
    u = lp.big_u[:n, :n].copy()
    if np.linalg.cond(u) > cond_limit:
        raise ConditioningError("dominant head block is numerically singular")
    v = np.linalg.inv(u).conj().T
    return SpectralPair(u=u, v=v, mu=lp.mu[:n].copy(), nu=lp.nu[:n].copy())


def recursive_approximate(
    a,
    depth_floor: int = 2,
    method: str = "truncate",
    opts: InflationOptions | None = None,
) -> ApproximationResult:
    """Approximate a spectral pair from recursively decomposed minors.

    Matrices of side <= depth_floor are decomposed directly.  Larger ones
    are partitioned into tau minors whose active blocks are decomposed
    recursively, lifted, and reduced back to size n by the chosen method
    (truncation by default, inflation on request).  The returned pair is
    exactly biorthogonal; its reconstruction quality against ``a`` is
    reported, not guaranteed.
    """
    a = _square(a)
    n = a.shape[0]
    if method not in ("truncate", "inflate"):
        raise PreconditionError(f"unknown method {method!r}")
    if not (2 <= depth_floor):
        raise PreconditionError("depth_floor must be at least 2")

    if n <= depth_floor:
        pair = eigen_decompose(a)
        report = pair.residual_report(a)
        return ApproximationResult(pair, report, method, depth_floor)

    minor_pairs = []
    for tau in range(n):
        m = tau_minor(a, tau)
        rows = [i for i in range(n) if i != tau]
        sub = recursive_approximate(
            m[np.ix_(rows, rows)], depth_floor=depth_floor, method=method, opts=opts
        ).pair
        minor_pairs.append(_embed_pair(sub, n, rows, zero_slots=1))
    lp = lift(minor_pairs, n)

    if method == "truncate":
        trunc = truncate(lp)
        pair = _extract_dominant_pair(lp)
        report = pair.residual_report(a)
        report.values["truncation_error"] = trunc.error
        report.values["truncated_block_error"] = float(
            np.linalg.norm(trunc.matrix - a) / max(np.linalg.norm(a), 1e-300)
        )
    else:
        result = inflate(lp, opts)
        pair = result.pair
        report = pair.residual_report(a)
        report.values["inflation_objective"] = result.final_objective
        report.values["inflation_converged"] = 0.0 if result.converged else 1.0
    return ApproximationResult(pair, report, method, depth_floor)
