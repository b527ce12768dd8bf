from .metric_algebra import (
    SCALE_LIMIT,
    ConformalParams,
    MetricSequence,
    OrderingChain,
    closed_form_iterate,
    conformal_combine,
    iterate_metrics,
    ordering_chain,
    pullback_f,
)

__all__ = [
    'SCALE_LIMIT',
    'ConformalParams',
    'MetricSequence',
    'OrderingChain',
    'closed_form_iterate',
    'conformal_combine',
    'iterate_metrics',
    'ordering_chain',
    'pullback_f',
]
