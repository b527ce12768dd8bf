import logging
from dataclasses import dataclass
from typing import NamedTuple

from circmetric.circulant import PositivityMode, SymCirc4, is_positive_definite, require_finite
from circmetric.errors import InvalidParams, NonFinite, NotPositiveDefinite, ScaleOverflow

logger = logging.getLogger(__name__)

SCALE_LIMIT = 1e300


@dataclass(frozen=True)
class ConformalParams:
    """(alpha, beta) of g~ = alpha*g + beta*f."""

    alpha: float
    beta: float

    def __post_init__(self):
        require_finite((self.alpha, self.beta), "conformal parameters")

    @property
    def is_valid(self) -> bool:
        return 0 < self.beta < self.alpha

    def validate(self) -> "ConformalParams":
        if not self.is_valid:
            raise InvalidParams(f"0 < beta < alpha fails for (alpha, beta) = ({self.alpha}, {self.beta})")
        return self

    @property
    def contraction_ratio(self) -> float:
        return (self.alpha - self.beta) / (self.alpha + self.beta)


@dataclass(frozen=True)
class MetricSequence:
    entries: tuple[SymCirc4, ...]
    params: ConformalParams
    renormalized: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, n: int) -> SymCirc4:
        return self.entries[n]

    def __iter__(self):
        return iter(self.entries)

    @property
    def last(self) -> SymCirc4:
        return self.entries[-1]


class OrderingChain(NamedTuple):
    """alpha*a + beta*c > beta*a + alpha*c > (alpha + beta)*b > 0."""

    top: float
    middle: float
    bottom: float

    @property
    def holds(self) -> bool:
        return self.top > self.middle > self.bottom > 0


def _checked(a: float, b: float, c: float) -> SymCirc4:
    try:
        require_finite((a, b, c))
    except NonFinite:
        raise ScaleOverflow(f"metric entries overflowed: ({a}, {b}, {c})") from None
    if max(abs(a), abs(b), abs(c)) > SCALE_LIMIT:
        raise ScaleOverflow(f"metric entry magnitude exceeds {SCALE_LIMIT:g}: ({a:.3e}, {b:.3e}, {c:.3e})")
    return SymCirc4(a, b, c)


def pullback_f(g: SymCirc4) -> SymCirc4:
    """f_ij = g_ik q_t^k q_j^t; on (a, b, c) this swaps a and c."""
    return SymCirc4(g.c, g.b, g.a)


def conformal_combine(g: SymCirc4, p: ConformalParams) -> SymCirc4:
    alpha, beta = p.alpha, p.beta
    return _checked(
        alpha * g.a + beta * g.c,
        (alpha + beta) * g.b,
        alpha * g.c + beta * g.a,
    )


def ordering_chain(g: SymCirc4, p: ConformalParams) -> OrderingChain:
    alpha, beta = p.alpha, p.beta
    return OrderingChain(
        alpha * g.a + beta * g.c,
        beta * g.a + alpha * g.c,
        (alpha + beta) * g.b,
    )


def _normalized(m: SymCirc4) -> SymCirc4:
    return m.scale(1.0 / m.trace())


def _check_sequence_inputs(g0: SymCirc4, p: ConformalParams, n: int) -> None:
    p.validate()
    if n < 0:
        raise InvalidParams(f"sequence length must be >= 0, got {n}")
    if not is_positive_definite(g0, PositivityMode.EXACT):
        raise NotPositiveDefinite(f"g0 = {g0} is not positive definite")


def iterate_metrics(g0: SymCirc4, p: ConformalParams, n: int, renormalize: bool = False) -> MetricSequence:
    """g_k = alpha*g_{k-1} + beta*f_{k-1} for k = 1..n.

    With `renormalize`, every entry is divided by its trace; angles are
    unchanged since they are scale invariant.
    """
    _check_sequence_inputs(g0, p, n)
    current = _normalized(g0) if renormalize else g0
    entries = [current]
    for k in range(1, n + 1):
        current = conformal_combine(current, p)
        if renormalize:
            current = _normalized(current)
        entries.append(current)
        logger.debug(f"g_{k} = {current}")
    return MetricSequence(tuple(entries), p, renormalize)


def closed_form_iterate(g0: SymCirc4, p: ConformalParams, n: int, renormalize: bool = False) -> SymCirc4:
    """Solves the recursion on the invariant combinations:
    a+c grows by (alpha+beta), a-c by (alpha-beta), b by (alpha+beta).
    """
    _check_sequence_inputs(g0, p, n)
    if renormalize:
        # divide through by (alpha+beta)^n before combining
        total = g0.a + g0.c
        diff = p.contraction_ratio**n * (g0.a - g0.c)
        return _normalized(SymCirc4((total + diff) / 2.0, g0.b, (total - diff) / 2.0))
    try:
        grow = (p.alpha + p.beta) ** n
        shrink = (p.alpha - p.beta) ** n
    except OverflowError:
        raise ScaleOverflow(f"(alpha + beta)^{n} overflows") from None
    total = grow * (g0.a + g0.c)
    diff = shrink * (g0.a - g0.c)
    return _checked((total + diff) / 2.0, grow * g0.b, (total - diff) / 2.0)
