"""
Report service: CSV series files and the structured-text report document.
"""
import csv
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from app.constants import FLOAT_FORMAT, REPORT_TEMPLATE, CheckStatus, ErrorMessages
from app.core.exceptions import OutputError
from app.core.logging import get_logger
from app.core.singleton import Singleton
from app.models.dynamics import ObservableSeries
from app.models.report import CheckResult, ReportDocument, ReportValue

logger = get_logger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
TIME_COLUMN = "time"

_INT = re.compile(r"^-?\d+$")
_CHECK = re.compile(r"^\[check (?P<name>.+)\]$")


def format_float(value: float) -> str:
    """17 significant digits; integral values keep a trailing '.0' so they read back as floats."""
    text = format(float(value), FLOAT_FORMAT)
    if _INT.match(text):
        text += ".0"
    return text


def format_value(value: Union[ReportValue, np.generic]) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def parse_value(text: str) -> ReportValue:
    """Inverse of format_value: int, then float, then the raw string."""
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


class ReportService(metaclass=Singleton):
    """Service for writing and reading result files."""

    def __init__(self, template_dir: Optional[Path] = None):
        """
        Initialize report service.

        Args:
            template_dir: Directory holding the report template
        """
        self._env = Environment(
            loader=FileSystemLoader(str(template_dir or TEMPLATE_DIR)),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            autoescape=False,
        )
        self._env.filters["num"] = format_value

    # ------------------------------------------------------------------
    # Files
    # ------------------------------------------------------------------

    @staticmethod
    def output_path(directory: Union[str, Path], name: str) -> Path:
        """
        Path of a result file, creating the directory if needed.

        Raises:
            OutputError: If the directory cannot be created
        """
        folder = Path(directory)
        try:
            folder.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(ErrorMessages.OUTPUT_NOT_WRITABLE.format(path=folder, detail=e))
        return folder / name

    @staticmethod
    def _write_text(path: Path, text: str) -> Path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as e:
            raise OutputError(ErrorMessages.OUTPUT_NOT_WRITABLE.format(path=path, detail=e))
        return path

    def write_table(
        self, path: Union[str, Path], header: Sequence[str], rows: Sequence[Sequence[float]]
    ) -> Path:
        """
        Write a numeric CSV table with a header row.

        Args:
            path: Destination file
            header: Column labels
            rows: Numeric rows

        Returns:
            Path: The written file

        Raises:
            OutputError: If the file cannot be written
        """
        path = Path(path)
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    writer.writerow([format_float(x) for x in row])
        except OSError as e:
            raise OutputError(ErrorMessages.OUTPUT_NOT_WRITABLE.format(path=path, detail=e))
        logger.debug("Wrote %d rows to %s", len(rows), path)
        return path

    def write_series(self, series: ObservableSeries, path: Union[str, Path]) -> Path:
        """Write a series as CSV: time, then one column per observable."""
        names = list(series.columns)
        data = np.column_stack([series.times] + [series[name] for name in names])
        return self.write_table(path, [TIME_COLUMN] + names, data.tolist())

    def read_series(self, path: Union[str, Path]) -> ObservableSeries:
        """
        Parse a CSV written by write_series.

        Raises:
            OutputError: If the file is missing or malformed
        """
        path = Path(path)
        try:
            with open(path, encoding="utf-8", newline="") as handle:
                rows = list(csv.reader(handle))
        except OSError as e:
            raise OutputError(ErrorMessages.BAD_SERIES_FILE.format(path=path, detail=e))
        if not rows or rows[0][0] != TIME_COLUMN:
            raise OutputError(ErrorMessages.BAD_SERIES_FILE.format(path=path, detail="no header"))
        header, body = rows[0], rows[1:]
        try:
            data = np.array([[float(x) for x in row] for row in body], dtype=float)
        except ValueError as e:
            raise OutputError(ErrorMessages.BAD_SERIES_FILE.format(path=path, detail=e))
        data = data.reshape(len(body), len(header))
        return ObservableSeries(
            times=data[:, 0],
            columns={name: data[:, i] for i, name in enumerate(header[1:], start=1)},
        )

    # ------------------------------------------------------------------
    # Report document
    # ------------------------------------------------------------------

    def render_report(self, doc: ReportDocument) -> str:
        """Render the structured-text report; no timestamps, so equal inputs give equal bytes."""
        return self._env.get_template(REPORT_TEMPLATE).render(doc=doc)

    def write_report(self, doc: ReportDocument, path: Union[str, Path]) -> Path:
        path = Path(path)
        self._write_text(path, self.render_report(doc))
        logger.info("Report written to %s", path)
        return path

    def parse_report(self, text: str) -> ReportDocument:
        """
        Parse a rendered report back into a ReportDocument.

        Raises:
            OutputError: If a line does not follow the schema
        """
        header: Dict[str, str] = {}
        checks: List[CheckResult] = []
        values: Dict[str, ReportValue] = {}
        notes: List[str] = []
        outputs: List[str] = []
        section: Optional[str] = None
        current: Dict[str, str] = {}

        def flush() -> None:
            if section == "check" and current:
                checks.append(
                    CheckResult(
                        name=current["name"],
                        reference=current.get("reference", ""),
                        residual=float(current["residual"]),
                        tolerance=float(current["tolerance"]),
                        status=CheckStatus(current["status"]),
                        detail=current.get("detail"),
                    )
                )

        for number, line in enumerate(text.splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            match = _CHECK.match(line)
            if match or line in ("[values]", "[notes]", "[outputs]"):
                flush()
                current = {}
                if match:
                    section = "check"
                    current["name"] = match.group("name")
                else:
                    section = line[1:-1]
                continue
            if section in ("notes", "outputs"):
                if not line.startswith("- "):
                    raise OutputError(
                        ErrorMessages.BAD_REPORT_LINE.format(line=number, text=line)
                    )
                (notes if section == "notes" else outputs).append(line[2:])
                continue
            key, sep, value = line.partition(": ")
            if not sep:
                raise OutputError(
                    ErrorMessages.BAD_REPORT_LINE.format(line=number, text=line)
                )
            if section is None:
                header[key] = value
            elif section == "check":
                current[key] = value
            else:
                values[key] = parse_value(value)
        flush()

        return ReportDocument(
            command=header.get("command", ""),
            seed=int(header.get("seed", "0")),
            units=header.get("units", ""),
            checks=checks,
            values=values,
            notes=notes,
            outputs=outputs,
        )

    def read_report(self, path: Union[str, Path]) -> ReportDocument:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise OutputError(ErrorMessages.BAD_REPORT_FILE.format(path=path, detail=e))
        return self.parse_report(text)
