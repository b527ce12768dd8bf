from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from circmetric.errors import NonFinite, OrderingViolation, SingularMetric

DIM = 4

# Vector action of q: (q w)_i = w_{i+1}, i.e. q_i^j = 1 for j = i + 1 (mod 4).
Q = np.roll(np.eye(DIM), 1, axis=1)


class MetricRole(str, Enum):
    METRIC = "metric"
    RAW = "raw"


class PositivityMode(str, Enum):
    SUFFICIENT = "sufficient"
    EXACT = "exact"


def require_finite(values: Iterable[float], what: str = "input") -> None:
    values = tuple(values)
    if not np.all(np.isfinite(np.asarray(values, dtype=float))):
        raise NonFinite(f"{what} contains NaN or Inf: {values}")


@dataclass(frozen=True)
class Vector4:
    """Tangent vector (x, y, z, u) at a point."""

    x: float
    y: float
    z: float
    u: float

    def __post_init__(self):
        require_finite(self.as_tuple(), "vector")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Vector4":
        values = [float(v) for v in values]
        if len(values) != DIM:
            raise ValueError(f"Vector4 needs {DIM} components, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.u)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class SymCirc4:
    """Symmetric circulant 4x4 tensor with first row (a, b, c, b).

    Only the three scalars are stored; the matrix is expanded on demand.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        require_finite(self.as_tuple(), "metric coefficients")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def first_row(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.b)

    def matrix(self) -> np.ndarray:
        row = np.array(self.first_row, dtype=float)
        # row i is row 0 shifted right by i
        return np.stack([np.roll(row, i) for i in range(DIM)])

    def trace(self) -> float:
        return DIM * self.a

    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def scale(self, factor: float) -> "SymCirc4":
        return SymCirc4(factor * self.a, factor * self.b, factor * self.c)

    def inverse(self) -> "SymCirc4":
        """Exact inverse, itself symmetric circulant, from the closed spectrum."""
        top, middle, bottom = eigenvalues(self)
        scale = self.max_abs() ** DIM
        if scale == 0.0 or abs(det_closed_form(self)) < 1e-12 * scale:
            raise SingularMetric(f"{self} is singular (det = {det_closed_form(self):.3e})")
        mu0, mu1, mu2 = 1.0 / top, 1.0 / middle, 1.0 / bottom
        return SymCirc4(
            (mu0 + 2.0 * mu1 + mu2) / 4.0,
            (mu0 - mu2) / 4.0,
            (mu0 - 2.0 * mu1 + mu2) / 4.0,
        )


@dataclass(frozen=True)
class AffinorPower:
    """Power k of the affinor q; k is reduced mod 4 since q^4 = E."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", int(self.k) % DIM)

    def matrix(self) -> np.ndarray:
        return affinor_matrix(self.k)


def affinor_matrix(k: int) -> np.ndarray:
    return np.linalg.matrix_power(Q, int(k) % DIM)


def _power(k: "AffinorPower | int") -> int:
    return k.k if isinstance(k, AffinorPower) else int(k) % DIM


def make_metric(a: float, b: float, c: float, role: MetricRole | str = MetricRole.METRIC) -> SymCirc4:
    require_finite((a, b, c), "metric coefficients")
    if MetricRole(role) is MetricRole.METRIC and not (a > c > b > 0):
        raise OrderingViolation(f"a > c > b > 0 fails for (a, b, c) = ({a}, {b}, {c})")
    return SymCirc4(float(a), float(b), float(c))


def det_closed_form(m: SymCirc4) -> float:
    a, b, c = m.as_tuple()
    return (a - c) ** 2 * ((a + c) ** 2 - 4.0 * b**2)


def eigenvalues(m: SymCirc4) -> tuple[float, float, float]:
    """(a+2b+c, a-c, a-2b+c) with multiplicities (1, 2, 1)."""
    a, b, c = m.as_tuple()
    return (a + 2.0 * b + c, a - c, a - 2.0 * b + c)


def spectrum(m: SymCirc4) -> np.ndarray:
    top, middle, bottom = eigenvalues(m)
    return np.array([top, middle, middle, bottom])


def is_positive_definite(m: SymCirc4, mode: PositivityMode | str = PositivityMode.EXACT) -> bool:
    if PositivityMode(mode) is PositivityMode.SUFFICIENT:
        return 0 < m.b < m.c < m.a
    return all(lam > 0 for lam in eigenvalues(m))


def is_indefinite(m: SymCirc4) -> bool:
    lams = eigenvalues(m)
    return min(lams) < 0 < max(lams)


def apply_affinor(w: Vector4, k: "AffinorPower | int" = 1) -> Vector4:
    # (q w) = (y, z, u, x): left cyclic shift
    return Vector4.of(np.roll(w.as_array(), -_power(k)))


def inner(m: SymCirc4, w: Vector4, v: Vector4) -> float:
    return float(w.as_array() @ m.matrix() @ v.as_array())
