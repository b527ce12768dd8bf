from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from circmetric.circulant import DIM, SymCirc4
from circmetric.errors import InvalidParams, OrderingViolation, OutOfDomain
from circmetric.metric import ConformalParams

DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in R^4, closed."""

    lower: tuple[float, float, float, float]
    upper: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.lower) != DIM or len(self.upper) != DIM:
            raise ValueError(f"Box needs {DIM} intervals")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"Box lower {self.lower} exceeds upper {self.upper}")

    @classmethod
    def cube(cls, lo: float, hi: float) -> "Box":
        return cls((lo,) * DIM, (hi,) * DIM)

    def contains(self, p: Iterable[float]) -> bool:
        p = np.asarray(tuple(p), dtype=float)
        return p.shape == (DIM,) and bool(np.all(p >= self.lower) and np.all(p <= self.upper))

    def require(self, p: Iterable[float]) -> np.ndarray:
        p = np.asarray(tuple(p), dtype=float)
        if not self.contains(p):
            raise OutOfDomain(f"point {tuple(p)} is outside the box {self.lower} .. {self.upper}")
        return p

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, DIM))


@dataclass(frozen=True)
class GradRow:
    """Row covector of partial derivatives."""

    d1: float
    d2: float
    d3: float
    d4: float

    @classmethod
    def of(cls, values: Iterable[float]) -> "GradRow":
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.d3, self.d4])

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def __add__(self, other: "GradRow") -> "GradRow":
        return GradRow.of(self.as_array() + other.as_array())

    def __sub__(self, other: "GradRow") -> "GradRow":
        return GradRow.of(self.as_array() - other.as_array())

    def __mul__(self, factor: float) -> "GradRow":
        return GradRow.of(factor * self.as_array())

    __rmul__ = __mul__


@dataclass(frozen=True)
class ScalarField:
    # eval must not keep state between calls
    eval: Callable[[np.ndarray], float]
    domain: Box
    fd_step: float = DEFAULT_FD_STEP
    name: str = "field"

    def __post_init__(self):
        if not self.fd_step > 0:
            raise InvalidParams(f"fd_step must be > 0, got {self.fd_step}")

    def __call__(self, p: Iterable[float]) -> float:
        return float(self.eval(np.asarray(tuple(p), dtype=float)))

    def with_step(self, fd_step: float) -> "ScalarField":
        return replace(self, fd_step=fd_step)


def combine(fn: Callable[..., float], *fields: ScalarField, name: str = "composite") -> ScalarField:
    """Pointwise fn(f1(p), f2(p), ...) on the first field's domain and step."""
    return ScalarField(
        eval=lambda p: fn(*(f.eval(p) for f in fields)),
        domain=fields[0].domain,
        fd_step=fields[0].fd_step,
        name=name,
    )


@dataclass(frozen=True)
class FieldBundle:
    """Metric coefficients A, B, C as fields, optionally with alpha, beta."""

    name: str
    A: ScalarField
    B: ScalarField
    C: ScalarField
    alpha: ScalarField | None = None
    beta: ScalarField | None = None
    description: str = field(default="", compare=False)

    @property
    def domain(self) -> Box:
        return self.A.domain

    @property
    def fd_step(self) -> float:
        return self.A.fd_step

    @property
    def has_params(self) -> bool:
        return self.alpha is not None and self.beta is not None

    def with_step(self, fd_step: float) -> "FieldBundle":
        return replace(
            self,
            A=self.A.with_step(fd_step),
            B=self.B.with_step(fd_step),
            C=self.C.with_step(fd_step),
            alpha=self.alpha.with_step(fd_step) if self.alpha is not None else None,
            beta=self.beta.with_step(fd_step) if self.beta is not None else None,
        )

    def metric_at(self, p: Iterable[float]) -> SymCirc4:
        p = self.domain.require(p)
        return SymCirc4(self.A(p), self.B(p), self.C(p))

    def params_at(self, p: Iterable[float]) -> ConformalParams:
        if not self.has_params:
            raise InvalidParams(f"family '{self.name}' carries no alpha/beta fields")
        p = self.domain.require(p)
        return ConformalParams(self.alpha(p), self.beta(p))

    def check_ordering(self, p: Iterable[float]) -> None:
        m = self.metric_at(p)
        if not m.a > m.c > m.b > 0:
            raise OrderingViolation(f"A > C > B > 0 fails at {tuple(p)}: (A, B, C) = {m.as_tuple()}")
        if self.has_params:
            self.params_at(p).validate()

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.domain.sample(n, rng)
