"""The m-operand Bhattacharya-Mesner product family.

Index pattern of the plain product, for output entry (i1, ..., im):
operand t (1-based, t < m) contributes its entry at (i1, ..., it, j, i_{t+2},
..., im), i.e. the contraction index j sits at 0-based axis t; the last
operand carries j on axis 0.  The general product replaces the single sum
over j by m independent sums weighted by a cubic background hypermatrix, and
reduces to the plain product when the background is the Kronecker delta.

Two evaluators are provided for each product: a vectorized default built on
``numpy.einsum`` and a reference nested-loop evaluator used as the
correctness oracle.  Tests pin the two against each other at 1e-13 relative.

Note on the third-order special case: the widely reproduced display of the
m=3 product with entries a1[i1,j,i2] a2[i1,i2,j] a3[j,i1,i2] is inconsistent
with the general index pattern above (it never references i3).  This module
follows the general pattern; ``bm_product_third_order_display`` evaluates the
display form verbatim for comparison.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass

import numpy as np

from .core import as_hypermatrix, is_cubic, kronecker_delta
from .errors import OperandShapeError, ShapeMismatchError

__all__ = [
    "OperandList",
    "validate_operands",
    "bm_product",
    "bm_product_reference",
    "general_bm_product",
    "general_bm_product_reference",
    "weighted_product",
    "dual_product",
    "dual_product_reference",
    "bm_product_third_order_display",
]

_LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class OperandList:
    """A validated tuple of BM-product operands with its inner dimension."""

    ops: tuple
    inner_dim: int

    def __post_init__(self):
        ops = tuple(as_hypermatrix(o) for o in self.ops)
        object.__setattr__(self, "ops", ops)
        validate_operands(ops, inner_dim=self.inner_dim)

    @classmethod
    def infer(cls, ops):
        ops = tuple(as_hypermatrix(o) for o in ops)
        if len(ops) < 2:
            raise OperandShapeError("a BM product needs at least 2 operands")
        return cls(ops, int(ops[-1].shape[0]))

    @property
    def out_shape(self):
        return operand_output_shape(self.ops)


def operand_output_shape(ops):
    """Output shape implied by an operand tuple: n1 from operand 0, the rest
    from the last operand."""
    m = len(ops)
    if m < 2:
        raise OperandShapeError("a BM product needs at least 2 operands")
    return (ops[0].shape[0],) + tuple(ops[-1].shape[1:])


def validate_operands(ops, inner_dim=None, out_shape=None):
    """Check the BM shape pattern, naming the offending operand and axis.

    Returns ``(out_shape, inner_dim)``.  When ``inner_dim`` or ``out_shape``
    are supplied they are enforced rather than inferred, which pins down the
    axes a purely mutual-consistency check cannot see at m = 2.
    """
    ops = [as_hypermatrix(o) for o in ops]
    m = len(ops)
    if m < 2:
        raise OperandShapeError(f"need at least 2 operands, got {m}")
    for t, op in enumerate(ops):
        if op.ndim != m:
            raise OperandShapeError(
                f"operand {t} has order {op.ndim}, expected {m}", operand=t
            )
    k = int(ops[-1].shape[0]) if inner_dim is None else int(inner_dim)
    if k < 1:
        raise OperandShapeError(f"inner dimension must be >= 1, got {k}")
    out = operand_output_shape(ops) if out_shape is None else tuple(out_shape)
    if len(out) != m:
        raise OperandShapeError(
            f"output shape {out} has length {len(out)}, expected {m}"
        )
    for t in range(m):
        expected = list(out)
        if t < m - 1:
            expected[t + 1] = k
        else:
            expected[0] = k
        for axis in range(m):
            if ops[t].shape[axis] != expected[axis]:
                raise OperandShapeError(
                    f"operand {t} axis {axis} has length {ops[t].shape[axis]}, "
                    f"expected {expected[axis]}",
                    operand=t,
                    axis=axis,
                )
    return out, k


def _coerce(ops):
    if isinstance(ops, OperandList):
        return list(ops.ops), ops.inner_dim
    ops = [as_hypermatrix(o) for o in ops]
    out, k = validate_operands(ops)
    return ops, k


def _plain_subscripts(m):
    out = list(_LETTERS[:m])
    j = _LETTERS[m]
    subs = []
    for t in range(m - 1):
        s = out.copy()
        s[t + 1] = j
        subs.append("".join(s))
    subs.append(j + "".join(out[1:]))
    return subs, "".join(out)


def bm_product(ops) -> np.ndarray:
    """Plain m-operand BM product (vectorized evaluator)."""
    ops, _ = _coerce(ops)
    m = len(ops)
    if m + 1 > len(_LETTERS):
        raise ShapeMismatchError(f"order {m} beyond supported limit")
    subs, out = _plain_subscripts(m)
    return np.einsum(",".join(subs) + "->" + out, *ops)


def bm_product_reference(ops) -> np.ndarray:
    """Nested-loop oracle for the plain BM product."""
    ops, k = _coerce(ops)
    m = len(ops)
    out_shape, _ = validate_operands(ops, inner_dim=k)
    res = np.zeros(out_shape, dtype=np.complex128)
    for idx in itertools.product(*[range(n) for n in out_shape]):
        acc = 0.0 + 0.0j
        for j in range(k):
            term = 1.0 + 0.0j
            for t in range(m):
                pos = list(idx)
                if t < m - 1:
                    pos[t + 1] = j
                else:
                    pos[0] = j
                term *= ops[t][tuple(pos)]
            acc += term
        res[idx] = acc
    return res


def _general_subscripts(m):
    out = list(_LETTERS[:m])
    js = list(_LETTERS[m:2 * m])
    subs = []
    for t in range(m - 1):
        s = out.copy()
        s[t + 1] = js[t + 1]
        subs.append("".join(s))
    subs.append(js[0] + "".join(out[1:]))
    return subs, "".join(js), "".join(out)


def general_bm_product(ops, background) -> np.ndarray:
    """General BM product with a cubic background hypermatrix.

    Setting the background to ``kronecker_delta(m, k)`` recovers the plain
    product.
    """
    ops, k = _coerce(ops)
    m = len(ops)
    b = as_hypermatrix(background)
    if b.ndim != m or not is_cubic(b) or b.shape[0] != k:
        raise ShapeMismatchError(
            f"background must be cubic of order {m} and side {k}, got shape {b.shape}"
        )
    if 2 * m > len(_LETTERS):
        raise ShapeMismatchError(f"order {m} beyond supported limit")
    subs, bsub, out = _general_subscripts(m)
    return np.einsum(",".join(subs) + "," + bsub + "->" + out, *ops, b)


def general_bm_product_reference(ops, background) -> np.ndarray:
    """Nested-loop oracle for the general BM product."""
    ops, k = _coerce(ops)
    m = len(ops)
    b = as_hypermatrix(background)
    if b.ndim != m or not is_cubic(b) or b.shape[0] != k:
        raise ShapeMismatchError(
            f"background must be cubic of order {m} and side {k}, got shape {b.shape}"
        )
    out_shape, _ = validate_operands(ops, inner_dim=k)
    res = np.zeros(out_shape, dtype=np.complex128)
    for idx in itertools.product(*[range(n) for n in out_shape]):
        acc = 0.0 + 0.0j
        for js in itertools.product(range(k), repeat=m):
            term = b[js]
            for t in range(m):
                pos = list(idx)
                if t < m - 1:
                    pos[t + 1] = js[t + 1]
                else:
                    pos[0] = js[0]
                term *= ops[t][tuple(pos)]
            acc += term
        res[idx] = acc
    return res


def weighted_product(c, ops, background) -> np.ndarray:
    """Entrywise product of ``c`` with the general BM product of ``ops``."""
    prod = general_bm_product(ops, background)
    c = as_hypermatrix(c)
    if c.shape != prod.shape:
        raise ShapeMismatchError(
            f"weight shape {c.shape} does not match product shape {prod.shape}"
        )
    return c * prod


def dual_product(background, ops, c) -> np.ndarray:
    """Dual of the weighted general BM product.

    The roles of the summation indices and the output indices are swapped:
    the result is cubic of order m and side k, equal entrywise to the
    background times the full contraction of the operands against ``c``.
    At m = 2 the construction is self dual.
    """
    ops, k = _coerce(ops)
    m = len(ops)
    b = as_hypermatrix(background)
    c = as_hypermatrix(c)
    out_shape, _ = validate_operands(ops, inner_dim=k)
    if b.ndim != m or not is_cubic(b) or b.shape[0] != k:
        raise ShapeMismatchError(
            f"background must be cubic of order {m} and side {k}, got shape {b.shape}"
        )
    if c.shape != tuple(out_shape):
        raise ShapeMismatchError(
            f"weight shape {c.shape} does not match forward-product shape {out_shape}"
        )
    subs, bsub, out = _general_subscripts(m)
    contr = np.einsum(",".join(subs) + "," + out + "->" + bsub, *ops, c)
    return b * contr


def dual_product_reference(background, ops, c) -> np.ndarray:
    """Nested-loop oracle for the dual product."""
    ops, k = _coerce(ops)
    m = len(ops)
    b = as_hypermatrix(background)
    c = as_hypermatrix(c)
    out_shape, _ = validate_operands(ops, inner_dim=k)
    res = np.zeros((k,) * m, dtype=np.complex128)
    for js in itertools.product(range(k), repeat=m):
        acc = 0.0 + 0.0j
        for idx in itertools.product(*[range(n) for n in out_shape]):
            term = c[idx]
            for t in range(m):
                pos = list(idx)
                if t < m - 1:
                    pos[t + 1] = js[t + 1]
                else:
                    pos[0] = js[0]
                term *= ops[t][tuple(pos)]
            acc += term
        res[js] = acc * b[js]
    return res


def bm_product_third_order_display(ops) -> np.ndarray:
    """Verbatim evaluation of the inconsistent third-order display form.

    Computes b[i1,i2,i3] = sum_j a1[i1,j,i2] a2[i1,i2,j] a3[j,i1,i2], which
    ignores i3 entirely.  Only defined for three cubic operands of equal
    side; provided purely so the two conventions can be compared.
    """
    ops = [as_hypermatrix(o) for o in ops]
    if len(ops) != 3:
        raise ShapeMismatchError("display variant is defined for exactly 3 operands")
    n = ops[0].shape[0]
    for t, op in enumerate(ops):
        if op.ndim != 3 or not is_cubic(op) or op.shape[0] != n:
            raise OperandShapeError(
                f"display variant needs cubic side-{n} operands, operand {t} has shape {op.shape}",
                operand=t,
            )
    slab = np.einsum("ajb,abj,jab->ab", *ops)
    return np.repeat(slab[:, :, None], n, axis=2)


def delta_background(m: int, k: int) -> np.ndarray:
    """Convenience alias for the Kronecker delta used as a background."""
    return kronecker_delta(m, k)
