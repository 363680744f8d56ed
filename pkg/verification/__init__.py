"""Verification package initialization"""

from .oracle_orchestrator import OracleOrchestrator
from .oracles import (
    CLOSED_FORM_TOL,
    EXACT_FLOOR,
    HOMOGENEOUS_TOL,
    MIN_ORDER,
    OracleReport,
    closed_form_endemic_F,
    closed_form_equilibrium_check,
    homogeneous_reduction_check,
    refinement_study,
)

__all__ = [
    'OracleReport', 'OracleOrchestrator',
    'homogeneous_reduction_check', 'closed_form_equilibrium_check',
    'closed_form_endemic_F', 'refinement_study',
    'HOMOGENEOUS_TOL', 'CLOSED_FORM_TOL', 'MIN_ORDER', 'EXACT_FLOOR',
]
