"""Lyapunov package initialization"""

from .functionals import (
    LyapunovSample,
    eval_dU_analytic,
    eval_dW_bound,
    eval_G,
    eval_U,
    eval_W,
    incidence_balance,
    jensen_excess,
)
from .monitor import LyapunovObserver, MonitorReport, monotonicity_monitor

__all__ = [
    'LyapunovSample', 'eval_U', 'eval_dU_analytic', 'eval_W', 'eval_G', 'eval_dW_bound',
    'jensen_excess', 'incidence_balance', 'LyapunovObserver', 'MonitorReport',
    'monotonicity_monitor',
]
