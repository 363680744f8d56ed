"""
Report Writer
Writes trajectories, JSON and Markdown summaries, and sweep indices
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from jinja2 import Template
from loguru import logger

from simulator.renewal_stepper import TrajectoryRecord

from .summary import NOT_CONVERGED, P0, PBAR, SummaryReport

CSV_FLOAT_FORMAT = '%.17g'

SUMMARY_TEMPLATE = Template("""# Scenario Summary: `{{ command }}`

**R0:** {{ '%.10g' % R0 }}

## Equilibria

- S⁰: {{ S0 | join(', ') }}
- η⁰: {{ '%.10g' % eta0 }}
{% if endemic %}- F̄: {{ '%.10g' % endemic.Fbar }}
- S̄: {{ endemic.Sbar | join(', ') }}
- η̄: {{ '%.10g' % endemic.etabar }}
{% else %}- No endemic equilibrium (R0 ≤ 1)
{% endif %}
## Interpretation

{{ interpretation }}
{% if classification %}
## Run

- Initial history: **{{ classification }}**
{% if convergence %}- Distance to P⁰ at t = {{ '%g' % convergence.t_end }}: {{ '%.3e' % convergence.distance_P0 }}
{% if convergence.distance_Pbar is not none %}- Distance to P̄: {{ '%.3e' % convergence.distance_Pbar }}
{% endif %}- Converged to: **{{ convergence.converged_to }}**
{% endif %}{% endif %}
{% if monitor %}
## Lyapunov Monitor

{{ '✅' if monitor.passed else '❌' }} {{ monitor.pairs }} step pairs checked at tolerance {{ '%.3e' % monitor.tolerance }}

- U violations: {{ monitor.u_violations }}{% if not monitor.check_U %} (U not checked: it is only a Lyapunov functional when R0 ≤ 1 or on the boundary){% endif %}
- W violations: {{ monitor.w_violations }} over {{ monitor.w_pairs }} pairs
- Positive dW bounds: {{ monitor.positive_dW_bounds }}
- Jensen violations: {{ monitor.jensen_violations }}
{% if monitor.max_abs_incidence_balance is not none %}- Largest |incidence balance|: {{ '%.3e' % monitor.max_abs_incidence_balance }}
{% endif %}
{% endif %}
{% if oracles %}
## Oracles

{% for oracle in oracles %}- {{ '✅' if oracle.passed else '❌' }} **{{ oracle.name }}**: max error {{ oracle.max_abs_err }}{% if oracle.observed_order is not none %}, observed order {{ '%.3f' % oracle.observed_order }}{% endif %}
{% endfor %}{% endif %}
{% if certified is not none %}
## Certificate

{% if certified %}✅ Certified{% else %}❌ Not certified
{% for failure in failures %}
- {{ failure }}{% endfor %}{% endif %}
{% endif %}""")


def interpret(summary: SummaryReport) -> str:
    """Plain-language reading of what the equilibria and verdicts mean"""
    lines = []
    R0 = summary.equilibria.R0
    if R0 <= 1:
        lines.append(
            "R0 ≤ 1: the infection-free equilibrium P⁰ is globally asymptotically stable "
            "and U is non-increasing along every solution."
        )
    elif summary.classification == 'Boundary':
        lines.append(
            "R0 > 1 but the initial history never produces an infection: the solution "
            "stays on the boundary and tends to P⁰."
        )
    else:
        lines.append(
            "R0 > 1: P⁰ is unstable and the endemic equilibrium P̄ attracts every solution "
            "that starts away from the boundary; W is non-increasing along them."
        )

    if summary.convergence is not None:
        verdict = summary.convergence.converged_to
        if verdict == NOT_CONVERGED:
            lines.append(
                "⚠️ The state at t_end is not yet within the convergence tolerance of either "
                "equilibrium; a longer run may be needed."
            )
        elif verdict in (P0, PBAR):
            lines.append(f"The state at t_end lies within tolerance of {verdict}.")
    return "\n\n".join(lines)


class ReportWriter:
    """Writes command outputs into one directory"""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def write_trajectory(self, record: TrajectoryRecord) -> Path:
        """Write trajectory.csv with 17 significant digits"""
        csv_file = self.output_dir / 'trajectory.csv'
        record.to_frame().to_csv(csv_file, index=False, float_format=CSV_FLOAT_FORMAT, na_rep='')
        logger.info(f"Trajectory saved: {csv_file}")
        return csv_file

    def write_summary(self, summary: SummaryReport) -> Path:
        """Write summary.json and its Markdown rendering"""
        summary_file = self.output_dir / 'summary.json'
        data = summary.to_dict()
        with open(summary_file, 'w') as f:
            json.dump(data, f, indent=2)
        logger.info(f"Summary saved: {summary_file}")

        report_file = self.output_dir / 'summary.md'
        with open(report_file, 'w') as f:
            f.write(self.render_markdown(summary, data))
        logger.info(f"Summary report saved: {report_file}")
        return summary_file

    def render_markdown(self, summary: SummaryReport, data: Optional[Dict] = None) -> str:
        data = data if data is not None else summary.to_dict()
        equilibria = data['equilibria']
        return SUMMARY_TEMPLATE.render(
            command=summary.command,
            R0=summary.equilibria.R0,
            S0=equilibria['S0'],
            eta0=equilibria['eta0'],
            endemic=equilibria.get('endemic'),
            interpretation=interpret(summary),
            classification=summary.classification,
            convergence=data.get('convergence'),
            monitor=data.get('monitor'),
            oracles=data.get('oracles', []),
            certified=summary.certified,
            failures=summary.failures,
        )

    def write_sweep_index(self, rows: List[Dict]) -> Path:
        """Write sweep_index.csv, one row per grid point"""
        index_file = self.output_dir / 'sweep_index.csv'
        pd.DataFrame(rows).to_csv(
            index_file, index=False, float_format=CSV_FLOAT_FORMAT, na_rep=''
        )
        logger.info(f"Sweep index saved: {index_file}")
        return index_file
