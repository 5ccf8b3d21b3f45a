#!/usr/bin/env python3
"""
Command-line entry: runs one configured command and turns failures into exit codes
"""

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from gibbs_explorer.core.config_manager import ConfigManager
from gibbs_explorer.core.engine import RunResult, SimulationEngine, format_duration
from gibbs_explorer.core.errors import ConfigValidationError, GibbsExplorerError
from gibbs_explorer.reports import (
    write_records_jsonl,
    write_run_manifest,
    write_samples_jsonl,
    write_summary_markdown,
    write_table_csv,
    write_verification_summary,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_VERIFICATION = 3


@dataclass(frozen=True)
class RunConfig:
    """Typed, frozen view of a validated configuration"""

    command: str
    dimension: int
    window: Tuple[Tuple[float, ...], Tuple[float, ...]]
    model: Dict[str, Any]
    boundary: Tuple[Tuple[float, ...], ...]
    seed: int
    samples: int
    truncation_eps: float
    threads: int
    output_dir: Path
    include_dominating: bool
    config_hash: str
    source: Optional[str] = None
    raw: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_manager(cls, manager: ConfigManager, output_dir: Optional[str] = None) -> "RunConfig":
        config = manager.config
        return cls(
            command=config["command"],
            dimension=int(config["dimension"]),
            window=(tuple(config["window"]["lower"]), tuple(config["window"]["upper"])),
            model=dict(config["model"]),
            boundary=tuple(tuple(p) for p in config["boundary"]),
            seed=int(config["mc"]["seed"]),
            samples=int(config["mc"]["samples"]),
            truncation_eps=float(config["mc"]["truncation_eps"]),
            threads=int(config["performance"]["threads"]),
            output_dir=Path(output_dir or config["output"]["directory"]),
            include_dominating=bool(config["output"]["include_dominating"]),
            config_hash=manager.config_hash(),
            source=str(manager.source) if manager.source else None,
            raw=config,
        )


@dataclass
class RunOutcome:
    exit_code: int
    outputs: List[Path]
    result: RunResult


class CLIProgressCallback:
    """Prints one line per engine stage; verbose mode adds the stage detail"""

    def __init__(self, verbose: bool = False):
        self.verbose = verbose
        self.current_stage = None

    def __call__(self, stage: str, status: str, detail: str = ""):
        stage_display = stage.replace("_", " ").title()
        if status == "starting":
            self.current_stage = stage
            if self.verbose:
                print(f"{stage_display}: {detail}")
            else:
                print(f"{stage_display}...", end=" ", flush=True)
        elif status == "complete":
            if self.verbose:
                print(f"Completed {stage_display} ({detail})")
            else:
                print("DONE")
        elif status == "error":
            if not self.verbose:
                print("ERROR")
            print(f"Error in {stage}: {detail}")
        elif self.verbose:
            print(f"  -> {detail}")


def write_outputs(result: RunResult, config: RunConfig) -> List[Path]:
    """Persist everything the run produced under the output directory"""
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    outputs: List[Path] = []
    if result.samples is not None:
        outputs.append(write_samples_jsonl(out / "samples.jsonl", result.samples, result.config_hash,
                                           config.include_dominating))
    for name, rows in result.tables.items():
        outputs.append(write_table_csv(out / f"{name}.csv", rows, result.config_hash, result.seed))
    if result.records:
        outputs.append(write_records_jsonl(out / "partition.json", result.records, result.config_hash,
                                           result.seed))
    if result.summary is not None:
        outputs.append(write_verification_summary(out / "verification_summary.json", result))
    outputs.append(write_summary_markdown(out / "summary.md", result, config.raw))
    outputs.append(write_run_manifest(out / "run_manifest.json", result, config.source, outputs))
    return outputs


def run(config: RunConfig, progress_callback: Optional[CLIProgressCallback] = None,
        configure_logging: bool = True) -> RunOutcome:
    """Dispatch the configured command and write its outputs"""
    engine = SimulationEngine(config.raw, config.config_hash, progress_callback, configure_logging)
    result = engine.run()
    outputs = write_outputs(result, config)
    exit_code = EXIT_VERIFICATION if result.verification_failed else EXIT_OK
    return RunOutcome(exit_code, outputs, result)


def run_cli(
    config_path: Optional[str] = None,
    output_dir: Optional[str] = None,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
    verbose: bool = False,
) -> int:
    """
    Load, validate and run a configuration

    Returns:
        Exit code: 0 ok, 1 invalid configuration, 2 runtime error, 3 verification failure
    """
    try:
        manager = ConfigManager()
        manager.load_config(config_path)
        manager.apply_overrides(seed=seed, threads=threads)
        config = RunConfig.from_manager(manager, output_dir)

        if verbose:
            print(f"Configuration loaded from: {config.source}")
            print(f"Output directory: {config.output_dir.absolute()}")
            print(f"Config hash: {config.config_hash}")
        print(f"Running '{config.command}' (seed {config.seed}, {config.threads} thread(s))")

        outcome = run(config, CLIProgressCallback(verbose))

        print(f"\nRun finished in {format_duration(outcome.result.wall_time)}")
        for path in outcome.outputs:
            print(f"  wrote {path}")
        if outcome.result.summary is not None:
            verdict = outcome.result.summary.to_dict()
            print(f"Verification: {verdict['verdict'].upper()} ({verdict['passed']}/{verdict['total']}, "
                  f"max |z| {verdict['max_abs_z']:.2f})")
        return outcome.exit_code

    except ConfigValidationError as e:
        print(f"Configuration error: {e}")
        return EXIT_VALIDATION

    except KeyboardInterrupt:
        logger.warning("run cancelled by user")
        print("\nRun cancelled by user")
        return EXIT_RUNTIME

    except GibbsExplorerError as e:
        print(f"\nRun failed: {e}")
        return e.exit_code

    except Exception as e:
        print(f"\nRun failed: {e}")
        if verbose:
            import traceback
            print("\nDetailed error information:")
            traceback.print_exc()
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1] if len(sys.argv) > 1 else None, verbose=True))
