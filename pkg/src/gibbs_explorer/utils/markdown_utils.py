"""
Markdown utilities for Gibbs Explorer using mdutils
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence

from mdutils.mdutils import MdUtils


def format_cell(value: Any) -> str:
    """Render a table cell; floats get six significant digits"""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class MarkdownReportBuilder:
    """Run summary builder on top of MdUtils"""

    def __init__(self, path: Path, title: str):
        self.path = Path(path)
        self.md = MdUtils(file_name=str(self.path.with_suffix("")), title=title)

    def add_section(self, title: str, level: int = 2):
        self.md.new_header(level=level, title=title, add_table_of_contents="n")

    def add_paragraph(self, text: str):
        self.md.new_paragraph(text)

    def add_bullet_list(self, items: List[str]):
        self.md.new_list(items)

    def add_table(self, headers: Sequence[str], rows: Sequence[Sequence[Any]]):
        """Pipe table with cells rendered by format_cell"""
        # mdutils wants one flat list, header row first
        flat = list(headers) + [format_cell(cell) for row in rows for cell in row]
        self.md.new_table(columns=len(headers), rows=len(rows) + 1, text=flat)

    def add_records(self, records: Sequence[Dict[str, Any]], limit: int = 20):
        """Table of dict rows sharing the first row's keys"""
        if not records:
            self.add_paragraph("No rows.")
            return
        headers = list(records[0].keys())
        self.add_table(headers, [[row.get(h, "") for h in headers] for row in records[:limit]])
        if len(records) > limit:
            self.add_paragraph(f"{len(records) - limit} more row(s) in the CSV output.")

    def add_key_value_table(self, data: Dict[str, Any]):
        self.add_table(["Property", "Value"], [[k, v] for k, v in data.items()])

    def save(self) -> str:
        """Write the markdown file and return the content"""
        self.md.create_md_file()
        return self.md.get_md_text()
