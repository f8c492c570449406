"""Three-term commutators and their cancellation diagnostics.

Each operator combines a product with fractional multipliers so that the
individually unbounded terms cancel.  With Q an l x m matrix field and u an
m-vector field (scalars are promoted to 1x1 and 1-component shapes):

* ``op_T(Q, u)      = D(Q Du)      - Q D^2 u     + (DQ)(Du)``
* ``op_S(Q, u)      = D(Q Du)      - R(Q u')     + R((DQ) R(Du))``
* ``op_R3(Q, u)     = D(Q Du)      - D^2(Q u)    + D((DQ) u)``
* ``op_S_tilde(Q,u) = D(Q Du)      - (Q R u)'    + R D((DQ) R u)``

where D is the quarter-power Laplacian, D^2 the half-power, R the
order-zero transform and prime the derivative.  The third term of op_T is
ordered matrix-times-vector: the only shape-consistent reading, and the one
that collapses the unit-map wedge identity (see euler_residual_forms).

All four operators are bilinear and mean-free; T and R3 vanish whenever Q
or u is constant, S and S_tilde vanish for constant Q because the adopted
order-zero symbol satisfies R(u') = D^2 u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import bmo, hardy, neg_half_dual, sobolev_total
from .spectral import (
    MatrixField,
    ScalarField,
    VectorField,
    derivative,
    frac_laplacian,
    riesz,
)

__all__ = [
    "wedge_matrix",
    "dot_matrix",
    "op_T",
    "op_S",
    "op_R3",
    "op_S_tilde",
    "anti_term",
    "structure_residual",
    "euler_residual_forms",
    "estimate_ratios",
    "EstimateRatios",
    "as_matrix",
    "as_vector",
]


def as_vector(u) -> VectorField:
    if isinstance(u, VectorField):
        return u
    if isinstance(u, ScalarField):
        return VectorField(u.grid, u.values[None, :])
    raise TypeError(f"expected a scalar or vector field, got {type(u).__name__}")


def as_matrix(Q) -> MatrixField:
    if isinstance(Q, MatrixField):
        return Q
    if isinstance(Q, ScalarField):
        return MatrixField(Q.grid, Q.values[None, None, :])
    raise TypeError(f"expected a scalar or matrix field, got {type(Q).__name__}")


def wedge_matrix(u: VectorField) -> MatrixField:
    """Antisymmetric pairing matrix: row (i, j), i < j, sends v to u_i v_j - u_j v_i.

    Applying it to u itself gives exactly zero row by row.
    """
    u = as_vector(u)
    if u.m < 2:
        raise ValueError("wedge needs at least two components")
    rows = []
    for i in range(u.m):
        for j in range(i + 1, u.m):
            row = np.zeros((u.m, u.grid.N))
            row[j] = u.data[i]
            row[i] = -u.data[j]
            rows.append(row)
    return MatrixField(u.grid, np.stack(rows))


def dot_matrix(u: VectorField) -> MatrixField:
    """1 x m matrix whose action is the pointwise inner product with u."""
    u = as_vector(u)
    return MatrixField(u.grid, u.data[None, :, :])


def op_T(Q, u) -> VectorField:
    Q, u = as_matrix(Q), as_vector(u)
    du = frac_laplacian(u, 0.25)
    t1 = frac_laplacian(Q.apply(du), 0.25)
    t2 = Q.apply(frac_laplacian(u, 0.5))
    t3 = frac_laplacian(Q, 0.25).apply(du)
    return t1 - t2 + t3


def op_S(Q, u) -> VectorField:
    Q, u = as_matrix(Q), as_vector(u)
    du = frac_laplacian(u, 0.25)
    t1 = frac_laplacian(Q.apply(du), 0.25)
    t2 = riesz(Q.apply(derivative(u)))
    t3 = riesz(frac_laplacian(Q, 0.25).apply(riesz(du)))
    return t1 - t2 + t3


def op_R3(Q, u) -> VectorField:
    Q, u = as_matrix(Q), as_vector(u)
    t1 = frac_laplacian(Q.apply(frac_laplacian(u, 0.25)), 0.25)
    t2 = frac_laplacian(Q.apply(u), 0.5)
    t3 = frac_laplacian(frac_laplacian(Q, 0.25).apply(u), 0.25)
    return t1 - t2 + t3


def op_S_tilde(Q, u) -> VectorField:
    Q, u = as_matrix(Q), as_vector(u)
    ru = riesz(u)
    t1 = frac_laplacian(Q.apply(frac_laplacian(u, 0.25)), 0.25)
    t2 = derivative(Q.apply(ru))
    t3 = riesz(frac_laplacian(frac_laplacian(Q, 0.25).apply(ru), 0.25))
    return t1 - t2 + t3


def anti_term(u) -> ScalarField:
    """Compensated scalar R(Du . R Du); mean-free, vanishes on eigenmaps."""
    u = as_vector(u)
    du = frac_laplacian(u, 0.25)
    return riesz(du.dot(riesz(du)))


def _check_unit(u: VectorField, tol: float = 1e-9) -> None:
    err = float(np.max(np.abs(u.pointwise_norm() - 1.0)))
    if err > tol:
        raise ValueError(f"field is not unit-valued (max | |u|-1 | = {err:.3g})")


def structure_residual(u) -> ScalarField:
    """Residual of the unit-length structure identity.

    For pointwise-unit u:  D(u . Du) - S(u., u) + anti_term(u), which
    algebraically equals R(u . u') under the adopted order-zero symbol.
    Exactly zero (to rounding) for band-limited unit maps such as the
    eigenmaps; small but nonzero for pointwise-projected maps, where it
    measures the aliasing of the off-grid length constraint.
    """
    u = as_vector(u)
    _check_unit(u)
    du = frac_laplacian(u, 0.25)
    lhs = frac_laplacian(u.dot(du), 0.25)
    s = op_S(dot_matrix(u), u).component(0)
    return lhs - s + anti_term(u)


def euler_residual_forms(u):
    """Wedge form of the critical-point equation and its commutator gap.

    Returns (wedge_form, commutator_gap) where wedge_form = (u wedge) D^2 u
    and the gap is D((u wedge) Du) - op_T(u wedge, u) - wedge_form.  The gap
    vanishes identically because the third term of op_T is a pointwise wedge
    of parallel vectors; a nonzero wedge_form therefore measures failure of
    criticality, not of the identity.
    """
    u = as_vector(u)
    _check_unit(u)
    W = wedge_matrix(u)
    wedge_form = W.apply(frac_laplacian(u, 0.5))
    lhs = frac_laplacian(W.apply(frac_laplacian(u, 0.25)), 0.25)
    gap = lhs - op_T(W, u) - wedge_form
    return wedge_form, gap


@dataclass(frozen=True)
class EstimateRatios:
    """Measured norm ratios; nan marks a degenerate (zero) denominator."""

    rT: float
    rS: float
    rR3: float
    rStilde: float
    rLone: float


def _dual_norm(v: VectorField) -> float:
    return math.sqrt(sum(neg_half_dual(v.component(i)).norm ** 2 for i in range(v.m)))


def _bmo_sup(u: VectorField, variant: str) -> float:
    return max(bmo(u.component(i), variant) for i in range(u.m))


def estimate_ratios(Q, u, variant: str = "L2") -> EstimateRatios:
    """Ratios of commutator norms to the product of factor norms.

    rT and rS divide the dual norm by ||Q||_{H^{1/2}} * bmo(u); rR3 and
    rStilde divide the square-function norm by ||Q|| * ||u||_{H^{1/2}};
    rLone is the single uncompensated term Q D^2 u over the T-denominator
    and is the one expected to grow when the factors concentrate on
    neighboring frequencies.
    """
    Qm, uv = as_matrix(Q), as_vector(u)
    q_norm = sobolev_total(Qm, 0.5)
    u_norm = sobolev_total(uv, 0.5)
    u_bmo = _bmo_sup(uv, variant)
    denom_T = q_norm * u_bmo
    denom_H = q_norm * u_norm

    def safe(num: float, den: float) -> float:
        return num / den if den > 0.0 else math.nan

    rT = safe(_dual_norm(op_T(Qm, uv)), denom_T)
    rS = safe(_dual_norm(op_S(Qm, uv)), denom_T)
    rR3 = safe(hardy(op_R3(Qm, uv)), denom_H)
    rStilde = safe(hardy(op_S_tilde(Qm, uv)), denom_H)
    rLone = safe(_dual_norm(Qm.apply(frac_laplacian(uv, 0.5))), denom_T)
    return EstimateRatios(rT, rS, rR3, rStilde, rLone)
