from .angle_engine import (
    AnglePair,
    AngleTrace,
    GramTriple,
    LimitEstimate,
    TraceRow,
    TraceSource,
    angle_pair,
    angles_in_radians,
    check_angle_input,
    direct_trace,
    eigenvector_residual,
    gram_triple,
    inverse_special_case,
    limit_cos_q,
    limit_estimate,
    mobius_closed_form,
    predicted_steps,
    q_orthogonal_vector,
    recurrence_trace,
    transform_angle_pair,
    transformed_gram_triple,
)

__all__ = [
    'AnglePair',
    'AngleTrace',
    'GramTriple',
    'LimitEstimate',
    'TraceRow',
    'TraceSource',
    'angle_pair',
    'angles_in_radians',
    'check_angle_input',
    'direct_trace',
    'eigenvector_residual',
    'gram_triple',
    'inverse_special_case',
    'limit_cos_q',
    'limit_estimate',
    'mobius_closed_form',
    'predicted_steps',
    'q_orthogonal_vector',
    'recurrence_trace',
    'transform_angle_pair',
    'transformed_gram_triple',
]
