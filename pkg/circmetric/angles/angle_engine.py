import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from circmetric.circulant import PositivityMode, SymCirc4, Vector4, is_positive_definite, require_finite
from circmetric.errors import (
    BoundaryFixedPoint,
    EigenvectorInput,
    InvalidParams,
    NotPositiveDefinite,
    ZeroVector,
)
from circmetric.metric import ConformalParams, iterate_metrics

logger = logging.getLogger(__name__)

EIGENVECTOR_TOL = 1e-12
BOUNDARY_TOL = 1e-12
# real eigenvectors of q (eigenvalues +1 and -1)
Q_EIGENVECTORS = (np.array([1.0, 1.0, 1.0, 1.0]), np.array([1.0, -1.0, 1.0, -1.0]))


class GramTriple(NamedTuple):
    g_ww: float
    g_wqw: float
    g_wq2w: float


@dataclass(frozen=True)
class AnglePair:
    """cos of the angle between w and qw (cos_q) and between w and q^2 w (cos_q2)."""

    cos_q: float
    cos_q2: float

    def __post_init__(self):
        require_finite((self.cos_q, self.cos_q2), "angle cosines")

    def in_bounds(self, slack: float = 0.0) -> bool:
        return abs(self.cos_q) <= 1.0 + slack and abs(self.cos_q2) <= 1.0 + slack

    @property
    def on_boundary(self) -> bool:
        return self.cos_q2 <= -1.0 + BOUNDARY_TOL


def angles_in_radians(pair: AnglePair) -> tuple[float, float]:
    return (
        float(np.arccos(np.clip(pair.cos_q, -1.0, 1.0))),
        float(np.arccos(np.clip(pair.cos_q2, -1.0, 1.0))),
    )


class TraceSource(str, Enum):
    RECURRENCE = "recurrence"
    DIRECT = "direct"


@dataclass(frozen=True)
class TraceRow:
    n: int
    cos_q: float
    cos_q2: float
    source: TraceSource

    @property
    def pair(self) -> AnglePair:
        return AnglePair(self.cos_q, self.cos_q2)


@dataclass(frozen=True)
class AngleTrace:
    rows: tuple[TraceRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, n: int) -> TraceRow:
        return self.rows[n]

    @property
    def last(self) -> TraceRow:
        return self.rows[-1]

    def cos_q(self) -> np.ndarray:
        return np.array([row.cos_q for row in self.rows])

    def cos_q2(self) -> np.ndarray:
        return np.array([row.cos_q2 for row in self.rows])


class LimitEstimate(NamedTuple):
    limit_cos_q: float
    limit_cos_q2: float
    converged: bool


def gram_triple(m: SymCirc4, w: Vector4) -> GramTriple:
    A, B, C = m.as_tuple()
    x, y, z, u = w.as_tuple()
    squares = x * x + y * y + z * z + u * u
    neighbours = x * y + x * u + y * z + z * u
    opposite = x * z + y * u
    return GramTriple(
        A * squares + 2 * B * neighbours + 2 * C * opposite,
        (A + C) * neighbours + B * (squares + 2 * opposite),
        2 * A * opposite + 2 * B * neighbours + C * squares,
    )


def transformed_gram_triple(g: SymCirc4, cp: ConformalParams, w: Vector4) -> GramTriple:
    """Gram values of alpha*g + beta*f written out in the coefficients of g."""
    A, B, C = g.as_tuple()
    alpha, beta = cp.alpha, cp.beta
    x, y, z, u = w.as_tuple()
    squares = x * x + y * y + z * z + u * u
    neighbours = x * y + x * u + y * z + z * u
    opposite = x * z + y * u
    return GramTriple(
        (alpha * A + beta * C) * squares + 2 * (alpha + beta) * B * neighbours + 2 * (alpha * C + beta * A) * opposite,
        (alpha + beta) * (A + C) * neighbours + (alpha + beta) * B * (squares + 2 * opposite),
        2 * (alpha * A + beta * C) * opposite + 2 * (alpha + beta) * B * neighbours + (alpha * C + beta * A) * squares,
    )


def eigenvector_residual(w: Vector4) -> float:
    """Smallest normalized distance from w to the real eigenlines of q."""
    vec = w.as_array()
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ZeroVector()
    return min(
        float(np.linalg.norm(vec - (vec @ e) / (e @ e) * e) / norm)
        for e in Q_EIGENVECTORS
    )


def check_angle_input(m: SymCirc4, w: Vector4) -> None:
    if not is_positive_definite(m, PositivityMode.EXACT):
        raise NotPositiveDefinite(f"angles need a positive definite metric, {m} is not")
    if w.norm() == 0.0:
        raise ZeroVector()
    residual = eigenvector_residual(w)
    if residual < EIGENVECTOR_TOL:
        raise EigenvectorInput(
            f"w = {w.as_tuple()} is proportional to (1,1,1,1) or (1,-1,1,-1) "
            f"(residual {residual:.1e}); w must not be an eigenvector of q"
        )


def angle_pair(m: SymCirc4, w: Vector4) -> AnglePair:
    check_angle_input(m, w)
    g_ww, g_wqw, g_wq2w = gram_triple(m, w)
    pair = AnglePair(g_wqw / g_ww, g_wq2w / g_ww)
    if pair.on_boundary:
        logger.warning(f"cos phi = {pair.cos_q2} at w = {w.as_tuple()}: repelling fixed point of the sequence")
    return pair


def transform_angle_pair(p0: AnglePair, cp: ConformalParams) -> AnglePair:
    cp.validate()
    alpha, beta = cp.alpha, cp.beta
    denominator = alpha + beta * p0.cos_q2
    return AnglePair(
        (alpha + beta) * p0.cos_q / denominator,
        (alpha * p0.cos_q2 + beta) / denominator,
    )


def inverse_special_case(cp: ConformalParams) -> float:
    """The cos phi that the transformation sends to 0."""
    cp.validate()
    return -cp.beta / cp.alpha


def q_orthogonal_vector(m: SymCirc4, root: int = 1) -> Vector4:
    """A w with g(w, qw) = 0.

    g(w, qw) = (A+C) s t + B (s^2 + t^2) with s = x+z, t = y+u. root = 0 takes
    s = t = 0; root = +-1 picks a nonzero root of B s^2 + (A+C) s t + B t^2 = 0
    with t = 1.
    """
    A, B, C = m.as_tuple()
    if root == 0:
        return Vector4(1.0, 2.0, -1.0, -2.0)
    if B == 0.0:
        s = 0.0
    else:
        s = (-(A + C) + math.copysign(1.0, root) * math.sqrt((A + C) ** 2 - 4 * B * B)) / (2 * B)
    t = 1.0
    return Vector4(s / 2 + 0.3, 0.7, s / 2 - 0.3, t - 0.7)


def _check_cosines(p0: AnglePair) -> None:
    if not p0.in_bounds(BOUNDARY_TOL):
        raise InvalidParams(f"angle cosines must lie in [-1, 1], got ({p0.cos_q}, {p0.cos_q2})")


def recurrence_trace(p0: AnglePair, cp: ConformalParams, n: int) -> AngleTrace:
    cp.validate()
    _check_cosines(p0)
    if n < 0:
        raise InvalidParams(f"trace length must be >= 0, got {n}")
    alpha, beta = cp.alpha, cp.beta
    cos_q, cos_q2 = p0.cos_q, p0.cos_q2
    rows = [TraceRow(0, cos_q, cos_q2, TraceSource.RECURRENCE)]
    for k in range(1, n + 1):
        denominator = alpha + beta * cos_q2
        cos_q, cos_q2 = (alpha + beta) * cos_q / denominator, (alpha * cos_q2 + beta) / denominator
        rows.append(TraceRow(k, cos_q, cos_q2, TraceSource.RECURRENCE))
    if any(abs(row.cos_q) > 1.0 + BOUNDARY_TOL for row in rows):
        logger.warning(f"cos(q-angle) left [-1, 1] from seed ({p0.cos_q}, {p0.cos_q2}); seed is not realizable")
    return AngleTrace(tuple(rows))


def direct_trace(g0: SymCirc4, w: Vector4, cp: ConformalParams, n: int, renormalize: bool = False) -> AngleTrace:
    """Row k is the angle pair of g_k at w for the metric sequence started at g0.

    Only g0 is guarded: 0 < beta < alpha keeps every g_k positive definite,
    while in floating point a_k - c_k rounds to 0 once (a_k - c_k) / (a_k + c_k)
    drops below machine epsilon.
    """
    check_angle_input(g0, w)
    sequence = iterate_metrics(g0, cp, n, renormalize=renormalize)
    rows = []
    for k, g_k in enumerate(sequence):
        g_ww, g_wqw, g_wq2w = gram_triple(g_k, w)
        rows.append(TraceRow(k, g_wqw / g_ww, g_wq2w / g_ww, TraceSource.DIRECT))
    return AngleTrace(tuple(rows))


def mobius_closed_form(cos_q2_0: float, cp: ConformalParams, n: int) -> float:
    """cos phi_n from t_n = r^n t_0 with t = (1 - cos)/(1 + cos), r = (alpha-beta)/(alpha+beta)."""
    cp.validate()
    if abs(cos_q2_0) > 1.0:
        raise InvalidParams(f"cos phi_0 must lie in [-1, 1], got {cos_q2_0}")
    if cos_q2_0 == -1.0:
        raise BoundaryFixedPoint()
    t_n = cp.contraction_ratio**n * (1.0 - cos_q2_0) / (1.0 + cos_q2_0)
    return (1.0 - t_n) / (1.0 + t_n)


def predicted_steps(cos_q2_0: float, cp: ConformalParams, tol: float) -> int:
    """Steps after which 1 - cos phi_n <= tol."""
    cp.validate()
    if cos_q2_0 <= -1.0:
        raise BoundaryFixedPoint()
    t0 = (1.0 - cos_q2_0) / (1.0 + cos_q2_0)
    # 1 - cos = 2t/(1+t) <= 2t
    if 2.0 * t0 <= tol:
        return 0
    return max(0, math.ceil(math.log(tol / (2.0 * t0)) / math.log(cp.contraction_ratio)))


def limit_cos_q(p0: AnglePair) -> float:
    """Exact limit of cos(q-angle) along the sequence: 2 cos_q / (1 + cos_q2)."""
    if p0.cos_q2 <= -1.0:
        raise BoundaryFixedPoint()
    return 2.0 * p0.cos_q / (1.0 + p0.cos_q2)


def limit_estimate(trace: AngleTrace, tol: float) -> LimitEstimate:
    if len(trace) == 0:
        raise InvalidParams("limit estimate needs a nonempty trace")
    if tol <= 0:
        raise InvalidParams(f"tolerance must be > 0, got {tol}")
    last = trace.last
    converged = False
    if len(trace) > 1:
        prev = trace[-2]
        converged = abs(last.cos_q - prev.cos_q) < tol and abs(last.cos_q2 - prev.cos_q2) < tol
    if not converged:
        logger.warning(f"trace of {len(trace)} rows has not settled to within {tol:g}")
    return LimitEstimate(last.cos_q, last.cos_q2, converged)
