"""Reporting package initialization"""

from .report_writer import ReportWriter, interpret
from .summary import NOT_CONVERGED, P0, PBAR, ConvergenceVerdict, SummaryReport

__all__ = [
    'ReportWriter', 'interpret',
    'SummaryReport', 'ConvergenceVerdict',
    'P0', 'PBAR', 'NOT_CONVERGED',
]
