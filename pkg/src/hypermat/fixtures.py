"""Deterministic fixture generation.

Everything takes an explicit seed or Generator so the corpora used by the
command-line ``gen`` subcommand and by the test suite are bit-reproducible.
"""

from __future__ import annotations

import numpy as np

from .core import kronecker_delta
from .hyper import HyperSpectralTriple
from .spectral import LiftedPair

__all__ = [
    "rng_from",
    "complex_normal",
    "random_hypermatrix",
    "random_integer_hypermatrix",
    "random_operands",
    "random_diagonalizable",
    "random_biorthogonal",
    "random_symmetric_222",
    "random_hyper_triple",
    "coupled_block_lift",
    "random_unit_vector",
]


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_normal(rng, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hypermatrix(seed, shape, real: bool = False) -> np.ndarray:
    rng = rng_from(seed)
    if real:
        return rng.normal(size=shape).astype(np.complex128)
    return complex_normal(rng, shape)


def random_integer_hypermatrix(seed, shape, low: int = -3, high: int = 4) -> np.ndarray:
    rng = rng_from(seed)
    return rng.integers(low, high, size=shape).astype(np.complex128)


def random_operands(seed, m: int, out_shape, k: int, integer: bool = False):
    """Operand tuple matching the BM shape pattern for the given output."""
    rng = rng_from(seed)
    ops = []
    for t in range(m):
        shape = list(out_shape)
        if t < m - 1:
            shape[t + 1] = k
        else:
            shape[0] = k
        if integer:
            ops.append(rng.integers(-3, 4, size=shape).astype(np.complex128))
        else:
            ops.append(complex_normal(rng, tuple(shape)))
    return tuple(ops)


def random_diagonalizable(seed, n: int, real: bool = False) -> np.ndarray:
    """Random dense matrix; generic draws are diagonalizable."""
    rng = rng_from(seed)
    if real:
        return rng.normal(size=(n, n)).astype(np.complex128)
    return complex_normal(rng, (n, n))


def random_biorthogonal(seed, n: int):
    """Pair (U, V) with U V^dagger = I, from a random invertible U."""
    rng = rng_from(seed)
    u = complex_normal(rng, (n, n)) + 2.0 * np.eye(n)
    v = np.linalg.inv(u).conj().T
    return u, v


def random_symmetric_222(seed) -> np.ndarray:
    """Random cyclic-symmetric 2 x 2 x 2 hypermatrix (4 orbit values)."""
    rng = rng_from(seed)
    vals = complex_normal(rng, 4)
    a = np.zeros((2, 2, 2), dtype=np.complex128)
    a[0, 0, 0] = vals[0]
    a[1, 1, 1] = vals[3]
    for idx in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        a[idx] = vals[1]
    for idx in ((0, 1, 1), (1, 1, 0), (1, 0, 1)):
        a[idx] = vals[2]
    return a


def random_hyper_triple(seed, n: int) -> HyperSpectralTriple:
    """Random candidate triple; scalings default to the delta, which is a
    diagonal analog exactly."""
    rng = rng_from(seed)
    delta = kronecker_delta(3, n)
    return HyperSpectralTriple(
        q=complex_normal(rng, (n, n, n)),
        u=complex_normal(rng, (n, n, n)),
        v=complex_normal(rng, (n, n, n)),
        d1=delta.copy(),
        d2=delta.copy(),
        d3=delta.copy(),
    )


def coupled_block_lift(seed, n: int, eps: float) -> LiftedPair:
    """Biorthogonal lifted pair that is block diagonal up to eps coupling.

    Built from an invertible matrix with eps-sized off blocks; the V factor
    is the inverse adjoint so the biorthogonality product is the identity to
    machine precision.  Bottom scaling entries are ones so the target
    bottom-right reconstruction is reachable.
    """
    rng = rng_from(seed)
    nn = n * n
    m = np.zeros((nn, nn), dtype=np.complex128)
    m[:n, :n] = complex_normal(rng, (n, n)) + 2.0 * np.eye(n)
    m[n:, n:] = complex_normal(rng, (nn - n, nn - n)) + 2.0 * np.eye(nn - n)
    m[:n, n:] = eps * complex_normal(rng, (n, nn - n))
    m[n:, :n] = eps * complex_normal(rng, (nn - n, n))
    big_v = np.linalg.inv(m).conj().T
    mu = np.concatenate([complex_normal(rng, n), np.ones(nn - n, dtype=np.complex128)])
    nu = np.ones(nn, dtype=np.complex128)
    return LiftedPair(big_u=m, big_v=big_v, mu=mu, nu=nu, block_size=n)


def random_unit_vector(seed, n: int) -> np.ndarray:
    rng = rng_from(seed)
    x = complex_normal(rng, n)
    return x / np.linalg.norm(x)
