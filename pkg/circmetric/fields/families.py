"""Named fixture families.

All of them are polynomial in s = x1+x2+x3+x4 or in the pair
(x1+x3, x2+x4). Fields satisfying grad A = (grad C) q^2 and
2 grad B = (grad C)(q + q^3) must have C = H(x1+x3) + K(x2+x4) with
H'' = K'' constant (mixed partials of B), so quadratics are the most
general nonlinear members.
"""

import numpy as np

from circmetric.errors import UnknownFamily

from .config_fields import DEFAULT_FD_STEP, Box, FieldBundle, ScalarField

# s stays in [1.3, 1.7]; contains (0.3, 0.4, 0.2, 0.6)
LINEAR_BOX = Box((0.25, 0.35, 0.15, 0.55), (0.35, 0.45, 0.25, 0.65))
# as LINEAR_BOX with x1 - x3 in [0.1, 0.3]
PAIR_BOX = Box((0.30, 0.35, 0.10, 0.55), (0.40, 0.45, 0.20, 0.65))
NONLINEAR_BOX = Box.cube(0.1, 0.5)
CONSTANT_BOX = Box.cube(0.0, 1.0)

LAMBDA, H1, K1 = 0.5, 0.3, 0.2
A0, B0, C0 = 1.0, 0.1, 1.5


def _s(p: np.ndarray) -> float:
    return p[0] + p[1] + p[2] + p[3]


def _odd(p: np.ndarray) -> float:
    return p[0] + p[2]


def _even(p: np.ndarray) -> float:
    return p[1] + p[3]


def _quadratic_c(p: np.ndarray) -> float:
    s, t = _odd(p), _even(p)
    return LAMBDA * (s * s + t * t) / 2.0 + H1 * s + K1 * t + C0


def _quadratic_b(p: np.ndarray) -> float:
    s, t = _odd(p), _even(p)
    return LAMBDA * s * t + K1 * s + H1 * t + B0


def _field(fn, box: Box, fd_step: float, name: str) -> ScalarField:
    return ScalarField(eval=fn, domain=box, fd_step=fd_step, name=name)


def _linear_metric(box: Box, fd_step: float) -> dict[str, ScalarField]:
    return {
        "A": _field(lambda p: _s(p) + 2.0, box, fd_step, "A"),
        "B": _field(lambda p: _s(p) - 0.9, box, fd_step, "B"),
        "C": _field(_s, box, fd_step, "C"),
    }


def _linear(fd_step: float) -> FieldBundle:
    return FieldBundle(name="linear", description="(A, B, C) = (s+2, s-0.9, s)", **_linear_metric(LINEAR_BOX, fd_step))


def _nonlinear(fd_step: float) -> FieldBundle:
    box = NONLINEAR_BOX
    return FieldBundle(
        name="nonlinear",
        description="quadratic in (x1+x3, x2+x4)",
        A=_field(lambda p: _quadratic_c(p) + A0, box, fd_step, "A"),
        B=_field(_quadratic_b, box, fd_step, "B"),
        C=_field(_quadratic_c, box, fd_step, "C"),
    )


def _broken(fd_step: float) -> FieldBundle:
    box = LINEAR_BOX
    return FieldBundle(
        name="broken",
        description="(A, B, C) = (s+2, 0.5, s); B-condition violated",
        A=_field(lambda p: _s(p) + 2.0, box, fd_step, "A"),
        B=_field(lambda p: 0.5, box, fd_step, "B"),
        C=_field(_s, box, fd_step, "C"),
    )


def _constant(fd_step: float) -> FieldBundle:
    box = CONSTANT_BOX
    return FieldBundle(
        name="constant",
        description="flat metric (3, 1, 2)",
        A=_field(lambda p: 3.0, box, fd_step, "A"),
        B=_field(lambda p: 1.0, box, fd_step, "B"),
        C=_field(lambda p: 2.0, box, fd_step, "C"),
    )


def _conformal_pair(fd_step: float) -> FieldBundle:
    box = PAIR_BOX
    return FieldBundle(
        name="conformal_pair",
        description="linear metric with beta = x1-x3, alpha = 5-beta",
        alpha=_field(lambda p: 5.0 - (p[0] - p[2]), box, fd_step, "alpha"),
        beta=_field(lambda p: p[0] - p[2], box, fd_step, "beta"),
        **_linear_metric(box, fd_step),
    )


def _constant_pair(fd_step: float) -> FieldBundle:
    box = LINEAR_BOX
    return FieldBundle(
        name="constant_pair",
        description="linear metric with alpha = 2, beta = 1",
        alpha=_field(lambda p: 2.0, box, fd_step, "alpha"),
        beta=_field(lambda p: 1.0, box, fd_step, "beta"),
        **_linear_metric(box, fd_step),
    )


FAMILIES = {
    "linear": _linear,
    "nonlinear": _nonlinear,
    "broken": _broken,
    "constant": _constant,
    "conformal_pair": _conformal_pair,
    "constant_pair": _constant_pair,
}


def builtin_families(name: str, fd_step: float = DEFAULT_FD_STEP) -> FieldBundle:
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise UnknownFamily(f"unknown field family '{name}'; choose from {sorted(FAMILIES)}") from None
    return factory(fd_step)
