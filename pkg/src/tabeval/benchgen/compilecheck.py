"""Standalone compilation checks through an injectable LaTeX runner.

The runner is a callable ``(tex_source) -> CompileOutcome``; tests
substitute a stub so the suite runs without a TeX installation, and the
real ``PdflatexRunner`` is used when pdflatex is on the PATH.
"""

from __future__ import annotations

import logging
import re
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

from ..complexity import heuristic_complexity
from ..errors import ToolMissing

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompileOutcome:
    ok: bool
    log: str
    pdf_bytes: Optional[bytes] = None


LatexRunner = Callable[[str], CompileOutcome]


@dataclass(frozen=True)
class TableAsset:
    """A harvested table that compiles standalone."""

    asset_id: str
    latex: str
    width_pt: float
    height_pt: float
    complexity: str
    origin: str = ""


@dataclass(frozen=True)
class TableRejection:
    asset_id: str
    reason: str
    log_tail: str


class PdflatexRunner:
    """Compiles a document with pdflatex in a throwaway directory."""

    def __init__(self, binary: str = "pdflatex", timeout: float = 60.0) -> None:
        if shutil.which(binary) is None:
            raise ToolMissing(f"{binary} not found on PATH")
        self.binary = binary
        self.timeout = timeout

    def __call__(self, tex_source: str) -> CompileOutcome:
        with tempfile.TemporaryDirectory(prefix="tabeval-tex-") as tmp:
            tex_path = Path(tmp) / "doc.tex"
            tex_path.write_text(tex_source, encoding="utf-8")
            try:
                proc = subprocess.run(
                    [self.binary, "-interaction=nonstopmode", "-halt-on-error", "doc.tex"],
                    cwd=tmp,
                    capture_output=True,
                    text=True,
                    timeout=self.timeout,
                )
            except subprocess.TimeoutExpired:
                return CompileOutcome(ok=False, log="pdflatex timed out")
            log_path = Path(tmp) / "doc.log"
            log_text = log_path.read_text(encoding="utf-8", errors="replace") if log_path.exists() else proc.stdout
            pdf_path = Path(tmp) / "doc.pdf"
            pdf = pdf_path.read_bytes() if pdf_path.exists() else None
            return CompileOutcome(ok=proc.returncode == 0 and pdf is not None, log=log_text, pdf_bytes=pdf)


STANDALONE_PACKAGES = (
    "geometry",
    "multirow",
    "booktabs",
    "graphicx",
    "amsmath",
    "amssymb",
    "adjustbox",
    "array",
    "tabularx",
    "makecell",
)

_WIDTH_RE = re.compile(r"TABLE-WIDTH=([0-9.]+)pt")
_HEIGHT_RE = re.compile(r"TABLE-HEIGHT=([0-9.]+)pt")


def measurement_document(table_latex: str) -> str:
    packages = "\n".join(f"\\usepackage{{{p}}}" for p in STANDALONE_PACKAGES)
    return (
        "\\documentclass{article}\n"
        f"{packages}\n"
        "\\pagestyle{empty}\n"
        "\\newsavebox\\tbmeasure\n"
        "\\begin{document}\n"
        "\\begin{lrbox}{\\tbmeasure}%\n"
        f"{table_latex}%\n"
        "\\end{lrbox}%\n"
        "\\typeout{TABLE-WIDTH=\\the\\wd\\tbmeasure}%\n"
        "\\typeout{TABLE-HEIGHT=\\the\\dimexpr\\ht\\tbmeasure+\\dp\\tbmeasure\\relax}%\n"
        "\\usebox{\\tbmeasure}\n"
        "\\end{document}\n"
    )


def validate_standalone(
    table_latex: str,
    runner: LatexRunner,
    *,
    asset_id: str,
    origin: str = "",
    complexity: Optional[str] = None,
) -> Union[TableAsset, TableRejection]:
    """Compile a table in a minimal document and record its rendered size.

    Returns a TableAsset on success, a TableRejection (with the log tail)
    when the table does not compile or cannot be measured.
    """
    outcome = runner(measurement_document(table_latex))
    tail = "\n".join(outcome.log.splitlines()[-20:])
    if not outcome.ok:
        return TableRejection(asset_id=asset_id, reason="compile failed", log_tail=tail)
    m_w = _WIDTH_RE.search(outcome.log)
    m_h = _HEIGHT_RE.search(outcome.log)
    if not m_w or not m_h:
        return TableRejection(asset_id=asset_id, reason="no measurements in log", log_tail=tail)
    width = float(m_w.group(1))
    height = float(m_h.group(1))
    if width <= 0 or height <= 0:
        return TableRejection(asset_id=asset_id, reason="non-positive dimensions", log_tail=tail)
    return TableAsset(
        asset_id=asset_id,
        latex=table_latex,
        width_pt=width,
        height_pt=height,
        complexity=complexity or heuristic_complexity(table_latex),
        origin=origin,
    )
