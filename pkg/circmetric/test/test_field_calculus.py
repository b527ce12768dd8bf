from dataclasses import replace

import numpy as np
import pytest

from circmetric.errors import InvalidParams, OrderingViolation, OutOfDomain, UnknownFamily
from circmetric.fields import (
    Box,
    GradRow,
    ScalarField,
    builtin_families,
    check_13star,
    check_14,
    check_15,
    check_ur,
    christoffel,
    combine,
    fd_gradient,
    grad_act,
    grad_act_matrix,
    nabla_q,
    nabla_q_residual,
)

POINT = (0.3, 0.4, 0.2, 0.6)


@pytest.fixture
def rng():
    return np.random.default_rng(13)


def test_grad_act_matches_matrix_product(rng):
    for _ in range(50):
        v = GradRow.of(rng.normal(size=4))
        for k in range(5):
            np.testing.assert_allclose(grad_act(v, k).as_array(), grad_act_matrix(v, k).as_array())
    v = GradRow(1.0, 2.0, 3.0, 4.0)
    # (v q)_j = v_{j-1}
    assert grad_act(v, 1) == GradRow(4.0, 1.0, 2.0, 3.0)


def test_fd_gradient_second_order():
    field = ScalarField(eval=lambda p: np.sin(p[0] + p[2]), domain=Box.cube(0.0, 1.0), name="sin")
    exact = np.cos(0.5) * np.array([1.0, 0.0, 1.0, 0.0])
    errors = [
        np.max(np.abs(fd_gradient(field.with_step(h), POINT).as_array() - exact))
        for h in (1e-2, 5e-3, 2.5e-3)
    ]
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=0.1)


def test_linear_family_is_parallel():
    bundle = builtin_families("linear")
    assert check_13star(bundle, POINT).worst < 1e-6
    assert nabla_q_residual(bundle, POINT) < 1e-5


def test_nonlinear_family_is_parallel(rng):
    bundle = builtin_families("nonlinear")
    for p in bundle.sample_points(100, rng):
        assert check_13star(bundle, p).worst < 1e-6
        assert nabla_q_residual(bundle, p) < 1e-5


def test_broken_family_fails_both_tests(rng):
    bundle = builtin_families("broken")
    for p in [POINT, *bundle.sample_points(20, rng)]:
        assert check_13star(bundle, p).worst > 1e-3
        assert nabla_q_residual(bundle, p) > 1e-3


def test_constant_family_is_flat():
    bundle = builtin_families("constant")
    np.testing.assert_allclose(christoffel(bundle, POINT), 0.0, atol=1e-12)
    assert nabla_q_residual(bundle, POINT) == pytest.approx(0.0, abs=1e-12)


def test_christoffel_symmetric_in_lower_indices(rng):
    bundle = builtin_families("nonlinear")
    p = bundle.sample_points(1, rng)[0]
    gamma = christoffel(bundle, p)
    np.testing.assert_allclose(gamma, np.swapaxes(gamma, 1, 2), atol=1e-12)
    assert nabla_q(bundle, p).shape == (4, 4, 4)


def test_conformal_pair_conditions(rng):
    bundle = builtin_families("conformal_pair")
    for p in bundle.sample_points(100, rng):
        assert check_13star(bundle, p).worst < 1e-6
        assert check_14(bundle.alpha, bundle.beta, p).worst < 1e-6
        assert check_15(bundle, p).worst < 1e-6
        assert check_ur(bundle, p).worst < 1e-6
        total = combine(lambda a, b: a + b, bundle.alpha, bundle.beta)
        assert fd_gradient(total, p).max_norm() < 1e-8


def test_constant_params_keep_conditions():
    bundle = builtin_families("constant_pair")
    assert check_14(bundle.alpha, bundle.beta, POINT).worst < 1e-9
    assert check_15(bundle, POINT).worst < 1e-6
    assert check_ur(bundle, POINT).worst < 1e-6


def test_transformed_broken_fields_violate_conditions():
    broken = builtin_families("broken")
    bundle = replace(
        broken,
        alpha=ScalarField(eval=lambda p: 2.0, domain=broken.domain),
        beta=ScalarField(eval=lambda p: 1.0, domain=broken.domain),
    )
    residuals = check_15(bundle, POINT)
    assert residuals.first < 1e-6
    assert residuals.worst > 0.1


def test_domain_and_family_errors():
    with pytest.raises(OutOfDomain):
        check_13star(builtin_families("linear"), (0.9, 0.9, 0.9, 0.9))
    with pytest.raises(UnknownFamily):
        builtin_families("sine")
    with pytest.raises(InvalidParams):
        builtin_families("linear").params_at(POINT)
    with pytest.raises(InvalidParams):
        builtin_families("linear", fd_step=0.0)


def test_ordering_checked_before_residuals():
    linear = builtin_families("linear")
    flipped = replace(linear, A=linear.C, C=linear.A)
    with pytest.raises(OrderingViolation):
        check_13star(flipped, POINT)


def test_box_sampling_stays_inside(rng):
    bundle = builtin_families("conformal_pair")
    points = bundle.sample_points(200, rng)
    assert points.shape == (200, 4)
    assert all(bundle.domain.contains(p) for p in points)
    assert bundle.domain.contains(POINT)
    assert builtin_families("linear").domain.contains(POINT)
