from .circulant import (
    DIM,
    Q,
    AffinorPower,
    MetricRole,
    PositivityMode,
    SymCirc4,
    Vector4,
    affinor_matrix,
    apply_affinor,
    det_closed_form,
    eigenvalues,
    inner,
    is_indefinite,
    is_positive_definite,
    make_metric,
    require_finite,
    spectrum,
)

__all__ = [
    'DIM',
    'Q',
    'AffinorPower',
    'MetricRole',
    'PositivityMode',
    'SymCirc4',
    'Vector4',
    'affinor_matrix',
    'apply_affinor',
    'det_closed_form',
    'eigenvalues',
    'inner',
    'is_indefinite',
    'is_positive_definite',
    'make_metric',
    'require_finite',
    'spectrum',
]
