from .config_fields import DEFAULT_FD_STEP, Box, FieldBundle, GradRow, ScalarField, combine
from .families import FAMILIES, builtin_families
from .field_calculus import (
    ResidualPair,
    check_13star,
    check_14,
    check_15,
    check_ur,
    christoffel,
    fd_gradient,
    grad_act,
    grad_act_matrix,
    metric_derivatives,
    nabla_q,
    nabla_q_residual,
    transformed_fields,
)

__all__ = [
    'DEFAULT_FD_STEP',
    'FAMILIES',
    'Box',
    'FieldBundle',
    'GradRow',
    'ResidualPair',
    'ScalarField',
    'builtin_families',
    'check_13star',
    'check_14',
    'check_15',
    'check_ur',
    'christoffel',
    'combine',
    'fd_gradient',
    'grad_act',
    'grad_act_matrix',
    'metric_derivatives',
    'nabla_q',
    'nabla_q_residual',
    'transformed_fields',
]
