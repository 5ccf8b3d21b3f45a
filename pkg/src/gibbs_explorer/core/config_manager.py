#!/usr/bin/env python3
"""
Run configuration: YAML files with per-key line numbers, built-in defaults,
GIBBS_EXPLORER_* environment overrides and range validation
"""

import copy
import hashlib
import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .errors import ConfigValidationError
from .seeding import MAX_SEED

logger = logging.getLogger(__name__)

COMMANDS = ("sample", "partition", "estimate", "gnz", "dlr", "converge", "disagree", "percolate")
VARIANTS = ("poisson", "strauss", "hard_sphere", "pair_potential", "cluster_particle")
POTENTIAL_FAMILIES = ("hard_core", "step", "inverse_power")
RADIUS_FAMILIES = ("constant", "uniform", "pareto")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
ENVIRONMENT_SECTIONS = ("performance", "output", "logging")

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[3] / "config" / "config.yaml"


class ConfigManager:
    """
    Configuration manager with environment variable support

    Provides configuration loading with the following priority:
    1. Command-line overrides (seed, threads)
    2. Environment variables
    3. Configuration file
    4. Default values (lowest priority)

    Unlike a warn-and-clamp loader, every violation raises
    ConfigValidationError carrying the YAML line of the offending key.
    """

    def __init__(self):
        self._config: Optional[Dict[str, Any]] = None
        self._lines: Dict[str, int] = {}
        self.source: Optional[Path] = None

    def load_config(self, config_path: Optional[str] = None) -> Dict[str, Any]:
        """
        Load configuration with defaults and environment overrides

        Args:
            config_path: Path to YAML config file (optional)

        Returns:
            Complete, validated configuration dictionary
        """
        if config_path:
            path = Path(config_path)
        elif os.getenv("GIBBS_EXPLORER_CONFIG"):
            path = Path(os.environ["GIBBS_EXPLORER_CONFIG"])
        else:
            path = DEFAULT_CONFIG_PATH

        self._config = self._merge_with_defaults(self._load_base_config(path))
        self._apply_env_overrides()
        self._validate_config()
        return self._config

    def load_mapping(self, mapping: Dict[str, Any]) -> Dict[str, Any]:
        """Load configuration from an in-memory mapping (no line information)"""
        self._lines = {}
        self.source = None
        self._config = self._merge_with_defaults(copy.deepcopy(mapping))
        self._validate_config()
        return self._config

    @property
    def config(self) -> Dict[str, Any]:
        if self._config is None:
            self.load_config()
        return self._config

    def get(self, key_path: str, default: Any = None) -> Any:
        """Value at a dotted key path such as 'mc.samples', or default when absent"""
        if self._config is None:
            self.load_config()

        value = self._config
        try:
            for key in key_path.split("."):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def line_of(self, key_path: str) -> Optional[int]:
        """YAML line of a key, falling back to its closest parent"""
        parts = key_path.split(".")
        while parts:
            line = self._lines.get(".".join(parts))
            if line is not None:
                return line
            parts.pop()
        return None

    def fail(self, key_path: str, message: str) -> ConfigValidationError:
        return ConfigValidationError(key_path, message, self.line_of(key_path))

    def apply_overrides(self, seed: Optional[int] = None, threads: Optional[int] = None) -> Dict[str, Any]:
        """Apply command-line overrides and re-validate"""
        if seed is not None:
            self._set_nested_value(self._config, ["mc", "seed"], seed)
        if threads is not None:
            self._set_nested_value(self._config, ["performance", "threads"], threads)
        self._validate_config()
        return self._config

    def config_hash(self) -> str:
        """
        SHA-256 of the canonical JSON form of the merged configuration

        Sections that only steer the run environment are left out, so the
        hash and every record carrying it ignore the worker count.
        """
        hashed = {k: v for k, v in self._config.items() if k not in ENVIRONMENT_SECTIONS}
        canonical = json.dumps(hashed, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _load_base_config(self, config_path: Path) -> Dict[str, Any]:
        """Parse the run file, keeping the source line of every key"""
        if not config_path.exists():
            raise ConfigValidationError("config", f"file not found: {config_path}")
        text = config_path.read_text(encoding="utf-8")
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
            config = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            raise ConfigValidationError(
                "config", f"YAML parsing error: {getattr(e, 'problem', e)}",
                mark.line + 1 if mark is not None else None,
            )
        if not isinstance(config, dict):
            raise ConfigValidationError("config", "top level must be a mapping", 1)
        self._lines = {}
        if node is not None:
            self._collect_lines(node, "")
        self.source = config_path
        logger.info(f"Configuration loaded from: {config_path}")
        return config

    def _collect_lines(self, node: yaml.Node, prefix: str):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
                self._lines[path] = key_node.start_mark.line + 1
                self._collect_lines(value_node, path)
        elif isinstance(node, yaml.SequenceNode):
            for index, item in enumerate(node.value):
                self._lines[f"{prefix}.{index}"] = item.start_mark.line + 1
                self._collect_lines(item, f"{prefix}.{index}")

    def _get_default_config(self) -> Dict[str, Any]:
        """Built-in values for every section"""
        return {
            "command": "sample",
            "dimension": 2,
            "window": {"lower": [0.0, 0.0], "upper": [1.0, 1.0]},
            "reference": {"intensity": 1.0},
            "model": {"variant": "poisson", "theta": 1.0},
            "boundary": [],
            "mc": {
                "samples": 1000,
                "seed": 20240607,
                "method": "rejection",
                "truncation_eps": 1.0e-4,
                "budget": 20000,
                "max_attempts": 100000,
                "inner_samples": 100,
                "mcmc_steps": None,
            },
            "estimate": {"max_order": 3, "sub_window_fraction": 1.0},
            "gnz": {"sub_window_fraction": 0.5, "radius": 0.1, "orders": [1, 2], "rhs_points": 4},
            "dlr": {"inner_fraction": 0.5, "functions": ["void", "truncated_count"]},
            "converge": {"ell_max": 4, "local_fraction": 0.5, "function": "truncated_count"},
            "disagree": {"boundary_alt": [], "window_scales": [1.0, 2.0, 3.0], "central_fraction": 0.25},
            "percolate": {
                "z_values": [0.05, 0.1, 0.2],
                "window_scales": [1.0, 2.0, 4.0],
                "test_radius": 0.5,
            },
            "grain": {
                "shape": "ball",
                "radius_law": {"family": "constant", "radius": 0.5},
                "orientation": "uniform",
            },
            "performance": {"threads": 1},
            "output": {"directory": "output", "include_dominating": False},
            "logging": {"level": "INFO", "log_to_file": True, "log_dir": "logs"},
        }

    def _merge_with_defaults(self, user_config: Dict[str, Any]) -> Dict[str, Any]:
        """User sections over the defaults; a user model section replaces the default one"""
        unknown = sorted(set(user_config) - set(self._get_default_config()))
        if unknown:
            raise self.fail(unknown[0], "unknown configuration section")
        merged = self._deep_merge(self._get_default_config(), user_config)
        # a user model replaces the default model wholesale
        if "model" in user_config:
            merged["model"] = copy.deepcopy(user_config["model"])
        return merged

    def _deep_merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursive overlay; nested mappings merge key by key, anything else is replaced"""
        merged = dict(base)
        for key, value in override.items():
            below = merged.get(key)
            if isinstance(below, dict) and isinstance(value, dict):
                value = self._deep_merge(below, value)
            merged[key] = value
        return merged

    def _apply_env_overrides(self):
        """GIBBS_EXPLORER_* variables take precedence over the file"""
        env_mappings = {
            "GIBBS_EXPLORER_SEED": ["mc", "seed"],
            "GIBBS_EXPLORER_SAMPLES": ["mc", "samples"],
            "GIBBS_EXPLORER_THREADS": ["performance", "threads"],
            "GIBBS_EXPLORER_LOG_LEVEL": ["logging", "level"],
            "GIBBS_EXPLORER_LOG_TO_FILE": ["logging", "log_to_file"],
        }

        for env_var, config_path in env_mappings.items():
            env_value = os.getenv(env_var)
            if env_value is not None:
                self._set_nested_value(self._config, config_path, self._convert_env_value(env_value))

    def _convert_env_value(self, value: str) -> Any:
        """Environment strings are read as YAML scalars, so 8 is an int and false a bool"""
        try:
            parsed = yaml.safe_load(value)
        except yaml.YAMLError:
            return value
        return parsed if isinstance(parsed, (bool, int, float)) else value

    def _set_nested_value(self, config: Dict[str, Any], path: List[str], value: Any):
        *parents, leaf = path
        section = config
        for key in parents:
            section = section.setdefault(key, {})
        section[leaf] = value

    # ------------------------------------------------------------------ #
    # Validation                                                         #
    # ------------------------------------------------------------------ #

    def _validate_config(self):
        """Validate configuration values; raise on the first violation"""
        valid_choices = {
            "command": COMMANDS,
            "model.variant": VARIANTS,
            "mc.method": ("rejection", "mcmc"),
            "logging.level": LOG_LEVELS,
        }
        for path, choices in valid_choices.items():
            value = self.get(path)
            if value not in choices:
                raise self.fail(path, f"must be one of {', '.join(choices)}, got {value!r}")

        integer_ranges: Dict[str, Tuple[int, int]] = {
            "dimension": (1, 3),
            "mc.samples": (1, 10 ** 9),
            "mc.seed": (0, MAX_SEED),
            "mc.budget": (1, 10 ** 9),
            "mc.max_attempts": (1, 10 ** 12),
            "mc.inner_samples": (1, 10 ** 7),
            "estimate.max_order": (1, 8),
            "gnz.rhs_points": (1, 10 ** 4),
            "converge.ell_max": (1, 64),
            "performance.threads": (1, 1024),
        }
        for path, (low, high) in integer_ranges.items():
            value = self.get(path)
            if isinstance(value, bool) or not isinstance(value, int):
                raise self.fail(path, f"must be an integer, got {value!r}")
            if not low <= value <= high:
                raise self.fail(path, f"must lie in [{low}, {high}], got {value}")

        eps = self.get("mc.truncation_eps")
        if not self._is_number(eps) or not 0 < eps < 1:
            raise self.fail("mc.truncation_eps", f"must lie in (0, 1), got {eps!r}")
        steps = self.get("mc.mcmc_steps")
        if steps is not None and (not isinstance(steps, int) or steps < 1):
            raise self.fail("mc.mcmc_steps", f"must be a positive integer or null, got {steps!r}")

        for path in ("estimate.sub_window_fraction", "gnz.sub_window_fraction", "dlr.inner_fraction",
                     "converge.local_fraction", "disagree.central_fraction"):
            value = self.get(path)
            if not self._is_number(value) or not 0 < value <= 1:
                raise self.fail(path, f"must lie in (0, 1], got {value!r}")
        for path in ("gnz.radius", "percolate.test_radius"):
            value = self.get(path)
            if not self._is_number(value) or value <= 0:
                raise self.fail(path, f"must be positive, got {value!r}")

        self._validate_window()
        self._validate_point_list("boundary")
        self._validate_point_list("disagree.boundary_alt")
        self._validate_model()
        self._validate_grain()
        self._validate_sequences()

    def _validate_window(self):
        dim = self.get("dimension")
        for side in ("lower", "upper"):
            bounds = self.get(f"window.{side}")
            if not isinstance(bounds, list) or len(bounds) != dim or not all(self._is_number(b) for b in bounds):
                raise self.fail(f"window.{side}", f"must be a list of {dim} finite numbers, got {bounds!r}")
        for axis, (lo, hi) in enumerate(zip(self.get("window.lower"), self.get("window.upper"))):
            if not lo < hi:
                raise self.fail("window", f"axis {axis}: lower {lo} must be below upper {hi}")

    def _validate_point_list(self, path: str):
        dim = self.get("dimension")
        points = self.get(path)
        if not isinstance(points, list):
            raise self.fail(path, "must be a list of points")
        for index, point in enumerate(points):
            if not isinstance(point, list) or len(point) not in (dim, dim + 1) \
                    or not all(self._is_number(v) for v in point):
                raise self.fail(f"{path}.{index}", f"must hold {dim} coordinates and an optional mark")
            if len(point) == dim + 1 and not 0 <= point[-1] <= 1:
                raise self.fail(f"{path}.{index}", f"mark must lie in [0, 1], got {point[-1]}")
            inside = all(lo <= x < hi for x, lo, hi in
                         zip(point[:dim], self.get("window.lower"), self.get("window.upper")))
            if inside:
                raise self.fail(f"{path}.{index}", "boundary points must lie outside the window")

    def _validate_model(self):
        model = self.get("model")
        if not isinstance(model, dict):
            raise self.fail("model", "must be a mapping")
        variant = model["variant"]
        allowed = {
            "poisson": {"theta"},
            "strauss": {"theta", "c", "R"},
            "hard_sphere": {"theta", "R"},
            "pair_potential": {"theta", "potential"},
            "cluster_particle": {"theta", "beta", "overlap_c"},
        }[variant] | {"variant"}
        extra = sorted(set(model) - allowed)
        if extra:
            raise self.fail(f"model.{extra[0]}", f"is not a parameter of variant '{variant}'")

        self._validate_theta(model.get("theta", 1.0))
        if variant == "strauss":
            c = model.get("c")
            if not self._is_number(c) or not 0 <= c <= 1:
                raise self.fail("model.c", f"Strauss interaction parameter c must lie in [0, 1], got {c!r}")
        if variant in ("strauss", "hard_sphere"):
            radius = model.get("R")
            if not self._is_number(radius) or radius <= 0:
                raise self.fail("model.R", f"interaction radius R must be positive, got {radius!r}")
        if variant == "pair_potential":
            self._validate_potential(model.get("potential"))
        if variant == "cluster_particle":
            beta = model.get("beta")
            if not self._is_number(beta) or beta < 0:
                raise self.fail("model.beta", f"beta must be nonnegative, got {beta!r}")
            c = model.get("overlap_c")
            if not (c == "inf" or (self._is_number(c) and c >= 0)):
                raise self.fail("model.overlap_c", f"overlap constant must be >= 0 or 'inf', got {c!r}")

    def _validate_theta(self, theta: Any):
        if self._is_number(theta):
            if theta < 0:
                raise self.fail("model.theta", f"theta must be nonnegative, got {theta}")
            return
        if not isinstance(theta, dict) or theta.get("family") not in ("constant", "linear"):
            raise self.fail("model.theta", "must be a number or a mapping with family constant|linear")
        if theta["family"] == "linear":
            gradient = theta.get("gradient")
            if not self._is_number(theta.get("base")) or not isinstance(gradient, list) \
                    or len(gradient) != self.get("dimension"):
                raise self.fail("model.theta", "linear theta needs a base and a gradient of length dimension")

    def _validate_potential(self, potential: Any):
        if not isinstance(potential, dict) or potential.get("family") not in POTENTIAL_FAMILIES:
            raise self.fail("model.potential", f"family must be one of {', '.join(POTENTIAL_FAMILIES)}")
        family = potential["family"]
        required = {"hard_core": ("R",), "step": ("R", "gamma"), "inverse_power": ("sigma", "exponent")}[family]
        for key in required:
            if not self._is_number(potential.get(key)):
                raise self.fail(f"model.potential.{key}", f"{family} potential needs a numeric {key}")
        for key in ("R", "sigma", "exponent"):
            if key in potential and potential[key] <= 0:
                raise self.fail(f"model.potential.{key}", f"must be positive, got {potential[key]}")

    def _validate_grain(self):
        grain = self.get("grain")
        if grain.get("shape") not in ("ball", "segment"):
            raise self.fail("grain.shape", f"must be ball or segment, got {grain.get('shape')!r}")
        law = grain.get("radius_law", {})
        family = law.get("family")
        if family not in RADIUS_FAMILIES:
            raise self.fail("grain.radius_law.family", f"must be one of {', '.join(RADIUS_FAMILIES)}")
        if family == "pareto" and not law.get("exponent", 0) > self.get("dimension"):
            raise self.fail("grain.radius_law.exponent",
                            "Pareto exponent must exceed the dimension (finite d-th moment)")
        orientation = grain.get("orientation")
        if orientation != "uniform" and not (isinstance(orientation, list)
                                             and len(orientation) == self.get("dimension")):
            raise self.fail("grain.orientation", "must be 'uniform' or a direction vector")

    def _validate_sequences(self):
        for path in ("percolate.z_values", "percolate.window_scales", "disagree.window_scales"):
            values = self.get(path)
            if not isinstance(values, list) or not values or not all(self._is_number(v) and v > 0 for v in values):
                raise self.fail(path, "must be a non-empty list of positive numbers")
        orders = self.get("gnz.orders")
        if not isinstance(orders, list) or not set(orders) <= {1, 2}:
            raise self.fail("gnz.orders", "must be a list drawn from [1, 2]")

    @staticmethod
    def _is_number(value: Any) -> bool:
        return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)

    def export_current_config(self, output_path: str):
        """Write the merged configuration back out as YAML"""
        with open(output_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self._config, f, default_flow_style=False, indent=2, sort_keys=True)
        logger.info(f"Configuration exported to: {output_path}")

    def get_mc_config(self) -> Dict[str, Any]:
        """The mc section"""
        return self.get("mc", {})

    def get_output_config(self) -> Dict[str, Any]:
        """The output section"""
        return self.get("output", {})


def get_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load, merge and validate a run file in one call"""
    return ConfigManager().load_config(config_path)
