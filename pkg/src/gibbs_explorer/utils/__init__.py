"""
Utility functions for Gibbs Explorer
"""

from .markdown_utils import MarkdownReportBuilder, format_cell

__all__ = ["MarkdownReportBuilder", "format_cell"]
