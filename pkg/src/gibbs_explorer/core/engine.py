"""
Simulation engine - runs one configured command through staged modules
"""

import logging
import time
from dataclasses import dataclass, field
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from gibbs_explorer.diagnostics import (
    TestReport,
    VerificationSummary,
    count_identity,
    disagreement_sweep,
    dlr_test,
    gnz_multivariate_test,
    gnz_test,
    local_convergence_probe,
    local_family,
    pair_family,
    select_functions,
    standard_family,
    summarize_reports,
)
from gibbs_explorer.estimators import (
    converted_factorial_moment,
    estimate_factorial_moment,
    janossy_masses,
    moment_table,
    ruelle_monitor,
    two_power_identity,
)
from gibbs_explorer.geometry import GrainLaw, subcriticality_probe
from gibbs_explorer.models import CheckResult, build_model, restricted_model, run_model_checks
from gibbs_explorer.partition import partition
from gibbs_explorer.sampler import SampleBatch, sample_batch

from .counting import CountingMeasure
from .errors import ConfigValidationError
from .estimate import Estimate
from .reference import ReferenceMeasure, intensity_from_config
from .seeding import RandomStreams
from .window import Window

LOG_FORMAT = "%(asctime)s.%(msecs)03d | %(levelname)-8s | %(name)s | %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"
CHECK_TRIALS = 200
VERIFYING_COMMANDS = ("gnz", "dlr")


def setup_logging(settings: Dict[str, Any]) -> logging.Logger:
    """Configure the package logger: console at the configured level, rotating file at DEBUG"""
    logger = logging.getLogger("gibbs_explorer")
    logger.setLevel(logging.DEBUG)
    logger.handlers.clear()
    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)

    console = logging.StreamHandler()
    console.setLevel(settings.get("level", "INFO"))
    console.setFormatter(formatter)
    logger.addHandler(console)

    if settings.get("log_to_file", True):
        logs_dir = Path(settings.get("log_dir", "logs"))
        logs_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            logs_dir / f"run_{datetime.now().strftime('%Y%m%d')}.log",
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    return logger


def format_duration(seconds: float) -> str:
    """Elapsed seconds as 250ms, 12.3s or 2m 5.0s"""
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    elif seconds < 60:
        return f"{seconds:.1f}s"
    minutes = int(seconds // 60)
    secs = seconds % 60
    return f"{minutes}m {secs:.1f}s"


@dataclass
class RunResult:
    """Everything a command produced, ready for the writers"""

    command: str
    config_hash: str
    seed: int
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    samples: Optional[SampleBatch] = None
    records: List[Dict[str, Any]] = field(default_factory=list)
    reports: List[TestReport] = field(default_factory=list)
    summary: Optional[VerificationSummary] = None
    checks: List[CheckResult] = field(default_factory=list)
    stage_statuses: Dict[str, str] = field(default_factory=dict)
    stage_timings: Dict[str, float] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def verification_failed(self) -> bool:
        return self.summary is not None and not self.summary.passed


class SimulationEngine:
    """Builds the model, window and streams from a validated config and runs its command"""

    def __init__(self, config: Dict[str, Any], config_hash: str,
                 progress_callback: Optional[Callable[[str, str, str], None]] = None,
                 configure_logging: bool = True):
        self.config = config
        self.config_hash = config_hash
        self.progress_callback = progress_callback
        if configure_logging:
            setup_logging(config.get("logging", {}))
        self.logger = logging.getLogger(__name__)

        self.dim = int(config["dimension"])
        self.window = Window(tuple(config["window"]["lower"]), tuple(config["window"]["upper"]))
        self.ref = ReferenceMeasure(intensity_from_config(config["reference"]["intensity"]))
        try:
            self.model = build_model(config["model"], self.dim, config.get("grain"))
        except (KeyError, ValueError) as exc:
            raise ConfigValidationError("model", str(exc)) from exc
        self.psi = CountingMeasure.from_json(config.get("boundary", []), self.dim)
        self.mc = config["mc"]
        self.streams = RandomStreams(int(self.mc["seed"]), int(config["performance"]["threads"]))
        self._result: Optional[RunResult] = None

    # ------------------------------------------------------------------ #
    # Orchestration                                                      #
    # ------------------------------------------------------------------ #

    def run(self) -> RunResult:
        command = self.config["command"]
        start_time = time.perf_counter()
        self._result = RunResult(command, self.config_hash, self.streams.master_seed)

        self.logger.info("=" * 80)
        self.logger.info(f"Starting '{command}' for {self.model!r} on {self.window} "
                         f"(seed {self.streams.master_seed}, {self.streams.workers} worker(s))")
        self.logger.info(f"Config hash: {self.config_hash}")

        handlers = {
            "sample": self._run_sample,
            "partition": self._run_partition,
            "estimate": self._run_estimate,
            "gnz": self._run_gnz,
            "dlr": self._run_dlr,
            "converge": self._run_converge,
            "disagree": self._run_disagree,
            "percolate": self._run_percolate,
        }
        self._result.checks = self._stage(
            "model_checks", "Checking model conditions",
            lambda: run_model_checks(self.model, self.streams.generator("checks"), self.window, CHECK_TRIALS))
        handlers[command]()
        if command in VERIFYING_COMMANDS:
            self._result.summary = summarize_reports(self._result.reports)
            self.logger.info(f"Verification verdict: {self._result.summary.to_dict()['verdict']} "
                             f"({self._result.summary.passed_count}/{self._result.summary.total} tests, "
                             f"max |z| {self._result.summary.max_abs_z:.2f})")

        self._result.wall_time = time.perf_counter() - start_time
        self.logger.info(f"Run completed in {format_duration(self._result.wall_time)}")
        self.logger.info("=" * 80)
        return self._result

    def _stage(self, stage: str, desc: str, fn: Callable[[], Any]) -> Any:
        """Run one timed stage; errors are reported and re-raised"""
        stage_start = time.perf_counter()
        self._update_progress(stage, "starting", desc)
        try:
            result = fn()
        except Exception as exc:
            duration = time.perf_counter() - stage_start
            self._result.stage_statuses[stage] = "failed"
            self._result.stage_timings[stage] = duration
            self._update_progress(stage, "error", f"{exc} (after {format_duration(duration)})")
            raise
        duration = time.perf_counter() - stage_start
        self._result.stage_statuses[stage] = "success"
        self._result.stage_timings[stage] = duration
        self._update_progress(stage, "complete", f"Completed in {format_duration(duration)}")
        return result

    def _update_progress(self, stage: str, status: str, detail: str = ""):
        """Send progress updates to the callback and log"""
        if self.progress_callback:
            self.progress_callback(stage, status, detail)
        if status == "starting":
            self.logger.info(f"Stage {stage}: STARTING - {detail}")
        elif status == "complete":
            self.logger.info(f"Stage {stage}: COMPLETE - {detail}")
        elif status == "error":
            self.logger.error(f"Stage {stage}: ERROR - {detail}")
        else:
            self.logger.info(f"Stage {stage}: {status} - {detail}")

    def _samples(self, window: Optional[Window] = None, tag: str = "sample") -> SampleBatch:
        return sample_batch(
            self.model, window or self.window, self.psi, int(self.mc["samples"]), self.streams,
            self.mc["method"], int(self.mc["max_attempts"]), self.mc.get("mcmc_steps"), self.ref, tag=tag)

    # ------------------------------------------------------------------ #
    # Commands                                                           #
    # ------------------------------------------------------------------ #

    def _run_sample(self):
        batch = self._stage("sampler", f"Drawing {self.mc['samples']} {self.mc['method']} samples",
                            self._samples)
        self._result.samples = batch
        counts = batch.counts()
        self.logger.info(f"Mean point count {counts.mean():.4f} over {len(batch)} replicates")

    def _run_partition(self):
        methods = ("series", "poisson_mc") if self.model.is_locally_stable else ("poisson_mc",)
        eps = float(self.mc["truncation_eps"])
        for method in methods:
            size = int(self.mc["budget"]) if method == "series" else int(self.mc["samples"])
            result = self._stage(
                f"partition_{method}", f"Estimating Z by {method}",
                lambda method=method, size=size: partition(
                    self.model, self.window, self.psi, method, size, eps, self.streams, self.ref))
            self._result.records.append(result.to_record(self.model))
            self._result.records.append(self._void_record(method, result.estimate.reciprocal()))

        if self.model.is_locally_stable:
            batch = self._stage("void_frequency", "Counting empty samples", self._samples)
            self._result.records.append(
                self._void_record("sampler", Estimate.from_samples(batch.counts() == 0)))

    def _void_record(self, method: str, estimate: Estimate) -> Dict[str, Any]:
        return {"op": "void_probability", "model": self.model.to_dict(), "window": self.window.to_dict(),
                "method": method, "value": estimate.value, "stderr": estimate.stderr, "n": estimate.n}

    def _run_estimate(self):
        settings = self.config["estimate"]
        batch = self._stage("sampler", f"Drawing {self.mc['samples']} samples", self._samples)
        sub = self.window.central(float(settings["sub_window_fraction"]))
        max_order = int(settings["max_order"])
        tables = self._result.tables

        tables["moments"] = self._stage(
            "moments", "Estimating factorial moments",
            lambda: [row.to_row() for row in moment_table(batch.configs, sub, max_order)])
        tables["janossy"] = [
            {"m": m, **estimate.to_dict()} for m, estimate in enumerate(janossy_masses(batch, sub, max_order))
        ]

        def conversions() -> List[Dict[str, Any]]:
            rows = []
            for m in range(1, max_order + 1):
                direct = estimate_factorial_moment(batch, [sub] * m)
                converted = converted_factorial_moment(batch, sub, m)
                rows.append({"m": m, "direct": direct.value, "direct_stderr": direct.stderr,
                             "converted": converted.value, "converted_stderr": converted.stderr,
                             "z_score": direct.z_score(converted)})
            return rows

        tables["conversions"] = self._stage("conversions", "Cross-checking Janossy conversions", conversions)
        if self.model.is_locally_stable:
            tables["ruelle"] = [row.to_row() for row in ruelle_monitor(self.model, batch.configs, sub, max_order,
                                                                        self.ref)]
            check = two_power_identity(restricted_model(self.model, self.window, self.psi), batch.configs, sub,
                                       self.streams, self.ref)
            tables["two_power"] = [check.to_row()]

    def _run_gnz(self):
        settings = self.config["gnz"]
        sub = self.window.central(float(settings["sub_window_fraction"]))
        radius = float(settings["radius"])
        rhs_points = int(settings["rhs_points"])
        batch = self._stage("sampler", f"Drawing {self.mc['samples']} samples",
                            lambda: self._samples(tag="gnz/sample"))
        reports: List[TestReport] = []
        if 1 in settings["orders"]:
            reports += self._stage(
                "gnz", "Checking the GNZ identity",
                lambda: gnz_test(self.model, self.window, standard_family(sub, radius), self.psi,
                                 streams=self.streams, ref=self.ref, rhs_points=rhs_points, samples=batch))
            reports.append(count_identity(self.model, self.window, batch.configs, self.psi, self.streams,
                                          self.ref))
        if 2 in settings["orders"]:
            reports += self._stage(
                "gnz2", "Checking the two-point GNZ identity",
                lambda: gnz_multivariate_test(self.model, self.window, pair_family(sub, radius), self.psi,
                                              streams=self.streams, ref=self.ref, rhs_points=rhs_points,
                                              samples=batch))
        self._result.reports = reports
        self._result.tables["gnz_reports"] = [r.to_row() for r in reports]

    def _run_dlr(self):
        settings = self.config["dlr"]
        inner = self.window.central(float(settings["inner_fraction"]))
        try:
            functions = select_functions(local_family(inner), settings["functions"])
        except ValueError as exc:
            raise ConfigValidationError("dlr.functions", str(exc)) from exc
        reports = self._stage(
            "dlr", f"Nested resampling of {inner}",
            lambda: dlr_test(self.model, self.window, inner, functions, self.psi, int(self.mc["samples"]),
                             int(self.mc["inner_samples"]), self.streams, self.ref,
                             int(self.mc["max_attempts"])))
        self._result.reports = reports
        self._result.tables["dlr_reports"] = [r.to_row() for r in reports]

    def _run_converge(self):
        settings = self.config["converge"]
        local_window = self.window.central(float(settings["local_fraction"]))
        try:
            function = select_functions(local_family(local_window), [settings["function"]])[0]
        except ValueError as exc:
            raise ConfigValidationError("converge.function", str(exc)) from exc
        rows = self._stage(
            "converge", f"Probing E[{function.function_id}] along {settings['ell_max']} windows",
            lambda: local_convergence_probe(self.model, function, self.window, int(settings["ell_max"]),
                                            int(self.mc["samples"]), self.streams, self.ref, self.mc["method"],
                                            int(self.mc["max_attempts"]), self.mc.get("mcmc_steps")))
        self._result.tables["convergence"] = [row.to_row() for row in rows]

    def _run_disagree(self):
        settings = self.config["disagree"]
        psi_alt = CountingMeasure.from_json(settings["boundary_alt"], self.dim)
        rows = self._stage(
            "disagree", "Coupling two boundary conditions",
            lambda: disagreement_sweep(self.model, self.window, self.psi, psi_alt, settings["window_scales"],
                                       float(settings["central_fraction"]), int(self.mc["samples"]),
                                       self.streams, self.ref, int(self.mc["max_attempts"])))
        self._result.tables["disagreement"] = [row.to_row() for row in rows]

    def _run_percolate(self):
        settings = self.config["percolate"]
        try:
            law = GrainLaw.from_config(self.config["grain"], self.dim)
        except ValueError as exc:
            raise ConfigValidationError("grain", str(exc)) from exc
        rows = self._stage(
            "percolate", "Sweeping Boolean-model boundary reach",
            lambda: subcriticality_probe(settings["z_values"], law, settings["window_scales"],
                                         int(self.mc["samples"]), self.streams, self.window,
                                         float(settings["test_radius"])))
        self._result.tables["percolation"] = [row.to_row() for row in rows]
