"""Static HTML summaries of run reports and scaling tables."""

from __future__ import annotations

import os
from typing import Any

from jinja2 import Environment, FileSystemLoader

from .simulation.models import RunReport
from .simulation.scaling import ScalingRow

TEMPLATES_DIR = os.path.join(os.path.dirname(__file__), "web", "templates")


def _render(template_name: str, output_file: str, **context: Any) -> None:
    env = Environment(loader=FileSystemLoader(TEMPLATES_DIR), autoescape=True)
    html = env.get_template(template_name).render(**context)

    output_dir = os.path.dirname(output_file)
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)

    with open(output_file, "w", encoding="utf-8") as f:
        f.write(html)


def generate_html(report: RunReport, output_file: str) -> None:
    """Write a run report as tables: estimates beside their predictions.

    Args:
        report: Aggregated run
        output_file: Path to write HTML file to
    """
    predictions = report.predictions
    rows = []
    for section, estimates, predicted in (
        ("pointer mean", report.pointer_means, predictions.get("pointer_means", {})),
        ("accumulated shift", report.accumulated_shift, predictions.get("accumulated_shift", {})),
    ):
        for name, estimate in estimates.items():
            rows.append({"section": section, "name": name, "estimate": estimate, "predicted": predicted.get(name)})

    _render(
        "report.html",
        output_file,
        title=f"{report.config['scenario']} (seed {report.config['seed']})",
        report=report,
        rows=rows,
        scalars={k: v for k, v in predictions.items() if isinstance(v, int | float) and not isinstance(v, bool)},
    )


def generate_scaling_html(rows: list[ScalingRow], g0: float, output_file: str) -> None:
    _render("scaling.html", output_file, title=f"Survival scaling, g0 = {g0}", rows=rows)
