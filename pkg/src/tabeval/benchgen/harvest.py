"""Harvesting tabular environments from a directory of LaTeX sources."""

from __future__ import annotations

import logging
import re
from pathlib import Path

from ..errors import CleanFailure

log = logging.getLogger(__name__)

_BEGIN_RE = re.compile(r"\\begin\{(tabular\*?)\}")
_END_RE = re.compile(r"\\end\{(tabular\*?)\}")


def _comment_spans(src: str) -> list[tuple[int, int]]:
    """Character ranges covered by % comments (escaped \\% excluded)."""
    spans = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "%":
            end = src.find("\n", i)
            end = len(src) if end == -1 else end
            spans.append((i, end))
            i = end
            continue
        i += 1
    return spans


def _in_spans(pos: int, spans: list[tuple[int, int]]) -> bool:
    return any(a <= pos < b for a, b in spans)


def extract_tabulars_from_text(src: str) -> list[str]:
    """Top-level tabular/tabular* environments in one source, in order.

    Environments nested inside another tabular stay embedded in their
    parent and are not returned separately; commented-out environments
    are ignored.
    """
    comments = _comment_spans(src)
    events: list[tuple[int, str, str]] = []
    for m in _BEGIN_RE.finditer(src):
        if not _in_spans(m.start(), comments):
            events.append((m.start(), "begin", m.group(1)))
    for m in _END_RE.finditer(src):
        if not _in_spans(m.start(), comments):
            events.append((m.end(), "end", m.group(1)))
    events.sort()
    results: list[str] = []
    depth = 0
    start = 0
    for pos, kind, _name in events:
        if kind == "begin":
            if depth == 0:
                start = pos
            depth += 1
        else:
            if depth == 0:
                continue  # stray \end, skip
            depth -= 1
            if depth == 0:
                results.append(src[start:pos])
    return results


def extract_tabulars(source_dir: str | Path) -> list[str]:
    """Harvest all top-level tabular sources from every .tex file in a tree.

    Files are visited in sorted order so the harvest is idempotent;
    unreadable files are skipped with a warning.
    """
    out: list[str] = []
    for path in sorted(Path(source_dir).rglob("*.tex")):
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", path, exc)
            continue
        out.extend(extract_tabulars_from_text(text))
    return out


# ---------------------------------------------------------------------------
# cleaning
# ---------------------------------------------------------------------------

_CITE_RE = re.compile(r"[~ \t]*\\[cC]ite[a-zA-Z]*\s*(?:\[[^\]]*\]\s*)*\{[^{}]*\}")
_LABEL_RE = re.compile(r"[~ \t]*\\label\s*\{[^{}]*\}")
_EQREF_RE = re.compile(r"\\eqref\s*\{[^{}]*\}")
_REF_RE = re.compile(r"\\(?:ref|pageref|autoref|cref|Cref)\s*\{[^{}]*\}")


def _brace_balance(src: str) -> int:
    balance = 0
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "{":
            balance += 1
        elif ch == "}":
            balance -= 1
        i += 1
    return balance


def clean_table(raw: str) -> str:
    """Strip non-content commands: citations, cross-references, labels, comments.

    References keep a visible numeric placeholder so cell text does not
    silently lose a token the reader would see.
    """
    before = _brace_balance(raw)
    out_lines = []
    for line in raw.splitlines():
        stripped = []
        i = 0
        while i < len(line):
            ch = line[i]
            if ch == "\\" and i + 1 < len(line):
                stripped.append(line[i : i + 2])
                i += 2
                continue
            if ch == "%":
                break
            stripped.append(ch)
            i += 1
        out_lines.append("".join(stripped))
    text = "\n".join(out_lines)
    text = _CITE_RE.sub("", text)
    text = _LABEL_RE.sub("", text)
    text = _EQREF_RE.sub("(1)", text)
    text = _REF_RE.sub("1", text)
    if _brace_balance(text) != before:
        raise CleanFailure("cleaning changed the brace balance")
    return text
