"""
Markdown run summary
"""

from pathlib import Path
from typing import Any, Dict

from gibbs_explorer.core.engine import RunResult
from gibbs_explorer.utils.markdown_utils import MarkdownReportBuilder


def write_summary_markdown(path: Path, result: RunResult, config: Dict[str, Any]) -> Path:
    """Run overview, model checks, tables and verdict; timings stay in the manifest"""
    builder = MarkdownReportBuilder(path, f"Gibbs Explorer - {result.command}")

    builder.add_section("Run")
    builder.add_key_value_table({
        "Command": result.command,
        "Model": config["model"].get("variant"),
        "Window": f"{config['window']['lower']} to {config['window']['upper']}",
        "Samples": config["mc"]["samples"],
        "Seed": result.seed,
        "Config hash": result.config_hash,
    })

    if result.checks:
        builder.add_section("Model checks")
        builder.add_table(["Check", "Passed", "Trials", "Worst", "Detail"],
                          [[c.name, c.passed, c.trials, c.worst, c.detail] for c in result.checks])

    for name, rows in result.tables.items():
        builder.add_section(name.replace("_", " ").capitalize())
        builder.add_records(rows)

    if result.records:
        builder.add_section("Partition records")
        builder.add_records([{k: v for k, v in r.items() if k not in ("model", "window")} for r in result.records])

    if result.summary is not None:
        builder.add_section("Verdict")
        verdict = result.summary.to_dict()
        builder.add_paragraph(
            f"**{verdict['verdict'].upper()}**: {verdict['passed']}/{verdict['total']} tests within |z| < 3, "
            f"max |z| = {verdict['max_abs_z']:.3f}.")
        if verdict["marginal"]:
            builder.add_bullet_list([f"marginal: {label}" for label in verdict["marginal"]])
        if verdict["failures"]:
            builder.add_bullet_list([f"failed: {label}" for label in verdict["failures"]])

    builder.save()
    return path
