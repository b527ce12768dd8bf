import logging
from typing import Iterable, NamedTuple

import numpy as np

from circmetric.circulant import DIM, Q, PositivityMode, SymCirc4, affinor_matrix, is_positive_definite
from circmetric.errors import NotPositiveDefinite

from .config_fields import FieldBundle, GradRow, ScalarField, combine

logger = logging.getLogger(__name__)


class ResidualPair(NamedTuple):
    first: float
    second: float

    @property
    def worst(self) -> float:
        return max(self.first, self.second)


def fd_gradient(f: ScalarField, p: Iterable[float]) -> GradRow:
    """Central differences, second order in f.fd_step."""
    p = f.domain.require(p)
    h = f.fd_step
    grad = np.empty(DIM)
    for i in range(DIM):
        step = np.zeros(DIM)
        step[i] = h
        grad[i] = (f.eval(p + step) - f.eval(p - step)) / (2.0 * h)
    return GradRow.of(grad)


def grad_act(v: GradRow, k: int) -> GradRow:
    # (v q^k)_j = v_{j-k}
    return GradRow.of(np.roll(v.as_array(), int(k) % DIM))


def grad_act_matrix(v: GradRow, k: int) -> GradRow:
    return GradRow.of(v.as_array() @ affinor_matrix(k))


def _q_plus_q3(v: GradRow) -> GradRow:
    return grad_act(v, 1) + grad_act(v, 3)


def check_13star(bundle: FieldBundle, p: Iterable[float]) -> ResidualPair:
    """grad A = (grad C) q^2 and 2 grad B = (grad C)(q + q^3)."""
    p = bundle.domain.require(p)
    bundle.check_ordering(p)
    grad_a, grad_b, grad_c = (fd_gradient(f, p) for f in (bundle.A, bundle.B, bundle.C))
    return ResidualPair(
        (grad_a - grad_act(grad_c, 2)).max_norm(),
        (2.0 * grad_b - _q_plus_q3(grad_c)).max_norm(),
    )


def check_14(alpha: ScalarField, beta: ScalarField, p: Iterable[float]) -> ResidualPair:
    """grad alpha = (grad beta) q^2 and grad beta = -(grad beta) q^2."""
    grad_alpha = fd_gradient(alpha, p)
    grad_beta = fd_gradient(beta, p)
    return ResidualPair(
        (grad_alpha - grad_act(grad_beta, 2)).max_norm(),
        (grad_beta + grad_act(grad_beta, 2)).max_norm(),
    )


def transformed_fields(bundle: FieldBundle) -> tuple[ScalarField, ScalarField, ScalarField]:
    """alpha*A + beta*C, (alpha + beta)*B, alpha*C + beta*A."""
    A, B, C, alpha, beta = bundle.A, bundle.B, bundle.C, bundle.alpha, bundle.beta
    return (
        combine(lambda a, c, al, be: al * a + be * c, A, C, alpha, beta, name="A~"),
        combine(lambda b, al, be: (al + be) * b, B, alpha, beta, name="B~"),
        combine(lambda a, c, al, be: al * c + be * a, A, C, alpha, beta, name="C~"),
    )


def check_15(bundle: FieldBundle, p: Iterable[float]) -> ResidualPair:
    """check_13star applied to the coefficients of alpha*g + beta*f."""
    bundle.params_at(p)
    a_t, b_t, c_t = transformed_fields(bundle)
    grad_a, grad_b, grad_c = (fd_gradient(f, p) for f in (a_t, b_t, c_t))
    return ResidualPair(
        (grad_a - grad_act(grad_c, 2)).max_norm(),
        (2.0 * grad_b - _q_plus_q3(grad_c)).max_norm(),
    )


def check_ur(bundle: FieldBundle, p: Iterable[float]) -> ResidualPair:
    """The linear system grad alpha, grad beta must solve when both g and alpha*g + beta*f satisfy check_13star."""
    m = bundle.metric_at(p)
    bundle.params_at(p)
    grad_alpha = fd_gradient(bundle.alpha, p)
    grad_beta = fd_gradient(bundle.beta, p)
    mixed = m.c * grad_alpha + m.a * grad_beta
    return ResidualPair(
        (m.a * grad_alpha + m.c * grad_beta - grad_act(mixed, 2)).max_norm(),
        (2.0 * m.b * (grad_alpha + grad_beta) - _q_plus_q3(mixed)).max_norm(),
    )


def metric_derivatives(bundle: FieldBundle, p: Iterable[float]) -> np.ndarray:
    """dg[i, l, j] = d_i g_lj, each slice a symmetric circulant."""
    grad_a, grad_b, grad_c = (fd_gradient(f, p).as_array() for f in (bundle.A, bundle.B, bundle.C))
    return np.stack([SymCirc4(grad_a[i], grad_b[i], grad_c[i]).matrix() for i in range(DIM)])


def christoffel(bundle: FieldBundle, p: Iterable[float]) -> np.ndarray:
    """gamma[k, i, j] = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)."""
    p = bundle.domain.require(p)
    g = bundle.metric_at(p)
    if not is_positive_definite(g, PositivityMode.EXACT):
        raise NotPositiveDefinite(f"g = {g} at {tuple(p)} is not positive definite")
    g_inv = g.inverse().matrix()
    dg = metric_derivatives(bundle, p)
    lowered = 0.5 * (
        np.einsum("ilj->lij", dg)
        + np.einsum("jli->lij", dg)
        - dg
    )
    return np.einsum("kl,lij->kij", g_inv, lowered)


def nabla_q(bundle: FieldBundle, p: Iterable[float]) -> np.ndarray:
    """(nabla_i q)_j^k = gamma^k_il q_j^l - gamma^l_ij q_l^k; q is constant."""
    gamma = christoffel(bundle, p)
    return np.einsum("kil,jl->ijk", gamma, Q) - np.einsum("lij,lk->ijk", gamma, Q)


def nabla_q_residual(bundle: FieldBundle, p: Iterable[float]) -> float:
    residual = float(np.max(np.abs(nabla_q(bundle, p))))
    logger.debug(f"|nabla q| = {residual:.3e} for '{bundle.name}' at {tuple(p)}")
    return residual
