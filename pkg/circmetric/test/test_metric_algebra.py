import numpy as np
import pytest

from circmetric.circulant import PositivityMode, SymCirc4, is_positive_definite
from circmetric.errors import InvalidParams, NonFinite, NotPositiveDefinite, ScaleOverflow
from circmetric.metric import (
    ConformalParams,
    closed_form_iterate,
    conformal_combine,
    iterate_metrics,
    ordering_chain,
    pullback_f,
)

G0 = SymCirc4(3.0, 1.0, 2.0)
CP = ConformalParams(2.0, 1.0)


def random_ordered_metric(rng) -> SymCirc4:
    b = rng.uniform(0.1, 3.0)
    c = b + rng.uniform(0.01, 3.0)
    a = c + rng.uniform(0.01, 3.0)
    return SymCirc4(a, b, c)


def random_params(rng) -> ConformalParams:
    beta = rng.uniform(0.01, 3.0)
    return ConformalParams(beta + rng.uniform(0.01, 3.0), beta)


def test_combine_worked_example():
    assert conformal_combine(G0, CP) == SymCirc4(8.0, 3.0, 7.0)
    assert conformal_combine(SymCirc4(8.0, 3.0, 7.0), CP) == SymCirc4(23.0, 9.0, 22.0)


def test_pullback_is_an_involution():
    assert pullback_f(G0) == SymCirc4(2.0, 1.0, 3.0)
    rng = np.random.default_rng(11)
    for _ in range(100):
        g = SymCirc4(*rng.uniform(-5.0, 5.0, size=3))
        assert pullback_f(pullback_f(g)) == g


def test_combine_is_alpha_g_plus_beta_f():
    g_t = conformal_combine(G0, CP)
    np.testing.assert_allclose(g_t.matrix(), 2.0 * G0.matrix() + 1.0 * pullback_f(G0).matrix())


def test_params_validation():
    assert CP.is_valid
    assert CP.contraction_ratio == pytest.approx(1.0 / 3.0)
    for alpha, beta in [(1.0, 2.0), (1.0, 1.0), (1.0, 0.0), (-1.0, -2.0)]:
        cp = ConformalParams(alpha, beta)
        assert not cp.is_valid
        with pytest.raises(InvalidParams):
            cp.validate()
    with pytest.raises(NonFinite):
        ConformalParams(float("nan"), 1.0)


def test_combine_keeps_ordering_and_positivity():
    rng = np.random.default_rng(16)
    for _ in range(1000):
        g, cp = random_ordered_metric(rng), random_params(rng)
        g_t = conformal_combine(g, cp)
        assert is_positive_definite(g_t, PositivityMode.EXACT)
        chain = ordering_chain(g, cp)
        assert chain.holds
        assert chain.top == pytest.approx(g_t.a)
        assert chain.bottom == pytest.approx(g_t.b)


def test_iterate_metrics_sequence():
    seq = iterate_metrics(G0, CP, 2)
    assert len(seq) == 3
    assert list(seq) == [G0, SymCirc4(8.0, 3.0, 7.0), SymCirc4(23.0, 9.0, 22.0)]
    assert seq.last == SymCirc4(23.0, 9.0, 22.0)
    assert len(iterate_metrics(G0, CP, 0)) == 1


def test_closed_form_matches_iteration():
    assert closed_form_iterate(G0, CP, 2) == SymCirc4(23.0, 9.0, 22.0)
    rng = np.random.default_rng(20)
    for _ in range(50):
        g0, cp = random_ordered_metric(rng), random_params(rng)
        n = int(rng.integers(0, 41))
        expected = iterate_metrics(g0, cp, n).last
        np.testing.assert_allclose(closed_form_iterate(g0, cp, n).as_tuple(), expected.as_tuple(), rtol=1e-10)
    for n in range(41):
        expected = iterate_metrics(G0, CP, n).last
        np.testing.assert_allclose(closed_form_iterate(G0, CP, n).as_tuple(), expected.as_tuple(), rtol=1e-10)


def test_renormalized_sequence_keeps_shape():
    seq = iterate_metrics(G0, CP, 30, renormalize=True)
    assert seq.renormalized
    for g_n in seq:
        assert g_n.trace() == pytest.approx(1.0)
    raw = iterate_metrics(G0, CP, 30).last
    np.testing.assert_allclose(seq.last.as_tuple(), raw.scale(1.0 / raw.trace()).as_tuple(), rtol=1e-12)
    np.testing.assert_allclose(
        closed_form_iterate(G0, CP, 30, renormalize=True).as_tuple(), seq.last.as_tuple(), rtol=1e-12
    )


def test_iterate_preconditions():
    with pytest.raises(InvalidParams):
        iterate_metrics(G0, ConformalParams(1.0, 2.0), 3)
    with pytest.raises(InvalidParams):
        iterate_metrics(G0, CP, -1)
    with pytest.raises(NotPositiveDefinite):
        iterate_metrics(SymCirc4(1.0, 2.0, 0.5), CP, 3)


def test_overflow_is_reported():
    huge = ConformalParams(1e100, 1e99)
    with pytest.raises(ScaleOverflow):
        iterate_metrics(G0, huge, 4)
    with pytest.raises(ScaleOverflow):
        closed_form_iterate(G0, huge, 4)
    assert iterate_metrics(G0, huge, 4, renormalize=True).last.trace() == pytest.approx(1.0)
