"""
Output writers

Data files carry the config hash and the master seed on every record and
are byte-identical across reruns and worker counts. The run manifest holds
wall time and library versions and is the one exception.
"""

import csv
import json
import logging
import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from gibbs_explorer.core.engine import RunResult
from gibbs_explorer.sampler import SampleBatch

logger = logging.getLogger(__name__)

TRACKED_PACKAGES = ("gibbs-explorer", "numpy", "scipy", "PyYAML", "mdutils")


def _dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def write_samples_jsonl(path: Path, batch: SampleBatch, config_hash: str,
                        include_dominating: bool = False) -> Path:
    """One configuration per line with its seed record"""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for index, (mu, seed) in enumerate(zip(batch.configs, batch.seeds)):
            record: Dict[str, Any] = {
                "config_hash": config_hash,
                "replicate": index,
                "seed": seed.to_dict(),
                "points": mu.to_json(),
            }
            if batch.attempts is not None:
                record["attempts"] = batch.attempts[index]
            if include_dominating and batch.dominating is not None:
                record["dominating"] = batch.dominating[index].to_json()
            handle.write(_dumps(record) + "\n")
    logger.info(f"Wrote {len(batch)} configurations to {path}")
    return path


def write_table_csv(path: Path, rows: Sequence[Dict[str, Any]], config_hash: str, seed: int) -> Path:
    """CSV with config_hash and seed leading every row"""
    fields: List[str] = ["config_hash", "seed"]
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({"config_hash": config_hash, "seed": seed, **row})
    logger.info(f"Wrote {len(rows)} row(s) to {path}")
    return path


def write_records_jsonl(path: Path, records: Iterable[Dict[str, Any]], config_hash: str, seed: int) -> Path:
    """One-line JSON records, used for partition and void-probability calls"""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(_dumps({"config_hash": config_hash, "seed": seed, **record}) + "\n")
    return path


def write_verification_summary(path: Path, result: RunResult) -> Path:
    payload = {
        "config_hash": result.config_hash,
        "seed": result.seed,
        "command": result.command,
        **result.summary.to_dict(),
        "reports": [r.to_row() for r in result.reports],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def package_versions() -> Dict[str, Optional[str]]:
    versions: Dict[str, Optional[str]] = {}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


def write_run_manifest(path: Path, result: RunResult, config_source: Optional[str],
                       outputs: Sequence[Path]) -> Path:
    manifest = {
        "config_hash": result.config_hash,
        "config_source": config_source,
        "seed": result.seed,
        "command": result.command,
        "outputs": sorted(p.name for p in outputs),
        "python": platform.python_version(),
        "versions": package_versions(),
        "stage_statuses": result.stage_statuses,
        "stage_timings": result.stage_timings,
        "wall_time_seconds": result.wall_time,
        "finished_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path
