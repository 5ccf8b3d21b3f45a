"""
Output writers and the Markdown run summary
"""

from .summary_report import write_summary_markdown
from .writers import (
    package_versions,
    write_records_jsonl,
    write_run_manifest,
    write_samples_jsonl,
    write_table_csv,
    write_verification_summary,
)

__all__ = [
    "write_samples_jsonl", "write_table_csv", "write_records_jsonl", "write_verification_summary",
    "write_run_manifest", "write_summary_markdown", "package_versions",
]
