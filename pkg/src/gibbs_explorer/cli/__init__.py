"""
Command-line interface for Gibbs Explorer
"""

from .cli_runner import CLIProgressCallback, RunConfig, RunOutcome, run, run_cli, write_outputs

__all__ = ["run_cli", "run", "RunConfig", "RunOutcome", "CLIProgressCallback", "write_outputs"]
