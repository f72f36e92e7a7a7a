"""Parsers from HTML, Markdown, LaTeX tabular and plain text into the canonical Grid.

All parsers share the same placement discipline: cells are slotted with
their spans, overlap is an error (``MalformedTable``), ragged rows are
right-padded, and any remaining holes are filled with empty 1x1 cells so
occupancy is total.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Optional

from .errors import MalformedTable
from .grid import Cell, Grid

HTML_FORMAT = "html"
MARKDOWN_FORMAT = "markdown"
LATEX_FORMAT = "latex"
TEXT_FORMAT = "text"

FORMATS = (HTML_FORMAT, MARKDOWN_FORMAT, LATEX_FORMAT, TEXT_FORMAT)


# ---------------------------------------------------------------------------
# shared placement machinery
# ---------------------------------------------------------------------------


@dataclass
class _Placed:
    content: str
    row: int
    col: int
    rowspan: int
    colspan: int
    is_header: bool = False


class _Sheet:
    """Tracks slot ownership while a parser lays cells out."""

    def __init__(self) -> None:
        self.placed: list[_Placed] = []
        self.taken: set[tuple[int, int]] = set()

    def is_taken(self, r: int, c: int) -> bool:
        return (r, c) in self.taken

    def place(self, cell: _Placed) -> None:
        for r in range(cell.row, cell.row + cell.rowspan):
            for c in range(cell.col, cell.col + cell.colspan):
                if (r, c) in self.taken:
                    raise MalformedTable(
                        f"cell at ({cell.row}, {cell.col}) would overlap slot ({r}, {c})"
                    )
                self.taken.add((r, c))
        self.placed.append(cell)

    def finish(self, n_rows: int, n_cols: int) -> Grid:
        """Clip overhanging rowspans, fill holes with empty cells, build the Grid."""
        if n_rows < 1 or n_cols < 1 or not self.placed:
            raise MalformedTable("table has no content")
        cells: list[Cell] = []
        for p in self.placed:
            rowspan = min(p.rowspan, n_rows - p.row)
            colspan = min(p.colspan, n_cols - p.col)
            cells.append(
                Cell(
                    content=p.content.strip(),
                    row=p.row,
                    col=p.col,
                    rowspan=rowspan,
                    colspan=colspan,
                    is_header=p.is_header,
                )
            )
        owned = {
            (r, c)
            for cell in cells
            for r in range(cell.row, cell.row + cell.rowspan)
            for c in range(cell.col, cell.col + cell.colspan)
        }
        for r in range(n_rows):
            for c in range(n_cols):
                if (r, c) not in owned:
                    cells.append(Cell(content="", row=r, col=c))
        cells.sort(key=lambda c: (c.row, c.col))
        return Grid(n_rows=n_rows, n_cols=n_cols, cells=tuple(cells))


# ---------------------------------------------------------------------------
# HTML
# ---------------------------------------------------------------------------


def _span_attr(value: Optional[str]) -> int:
    try:
        n = int(str(value).strip())
    except (TypeError, ValueError):
        return 1
    return max(1, n)


class _TableHTMLParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.sheet = _Sheet()
        self.table_depth = 0
        self.tables_seen = 0
        self.table_closed = False
        self.row: int = -1
        self.col: int = 0
        self.in_row = False
        self.cell_text: Optional[list[str]] = None
        self.cell_spans = (1, 1)
        self.cell_header = False

    # -- element handling ---------------------------------------------------

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        if tag == "table":
            if self.table_depth >= 1:
                raise MalformedTable("nested tables are not supported")
            if self.tables_seen >= 1:
                raise MalformedTable("input contains more than one table")
            self.table_depth += 1
            self.tables_seen += 1
            return
        if self.table_depth == 0:
            return
        if tag == "tr":
            self._close_cell()
            self._open_row()
        elif tag in ("td", "th"):
            self._close_cell()
            if not self.in_row:
                raise MalformedTable(f"<{tag}> outside a table row")
            a = dict(attrs)
            self.cell_text = []
            self.cell_spans = (_span_attr(a.get("rowspan")), _span_attr(a.get("colspan")))
            self.cell_header = tag == "th"
        elif tag == "br" and self.cell_text is not None:
            self.cell_text.append("\n")

    def handle_startendtag(self, tag, attrs):
        if tag.lower() == "br" and self.cell_text is not None:
            self.cell_text.append("\n")

    def handle_endtag(self, tag):
        tag = tag.lower()
        if self.table_depth == 0:
            return
        if tag in ("td", "th"):
            self._close_cell()
        elif tag == "tr":
            self._close_cell()
            self.in_row = False
        elif tag == "table":
            self._close_cell()
            self.in_row = False
            self.table_depth -= 1
            self.table_closed = True

    def handle_data(self, data):
        if self.cell_text is not None:
            self.cell_text.append(data)

    # -- row/cell bookkeeping -----------------------------------------------

    def _open_row(self) -> None:
        self.row += 1
        self.col = 0
        self.in_row = True

    def _close_cell(self) -> None:
        if self.cell_text is None:
            return
        while self.sheet.is_taken(self.row, self.col):
            self.col += 1
        rowspan, colspan = self.cell_spans
        self.sheet.place(
            _Placed(
                content="".join(self.cell_text),
                row=self.row,
                col=self.col,
                rowspan=rowspan,
                colspan=colspan,
                is_header=self.cell_header,
            )
        )
        self.col += colspan
        self.cell_text = None


def parse_html(table_markup: str) -> Grid:
    """Parse one HTML ``<table>`` element into the canonical grid."""
    parser = _TableHTMLParser()
    try:
        parser.feed(table_markup)
        parser.close()
    except MalformedTable:
        raise
    except Exception as exc:  # html.parser raises on badly broken markup
        raise MalformedTable(f"unparseable HTML: {exc}") from exc
    if parser.tables_seen == 0:
        raise MalformedTable("no <table> element found")
    if not parser.table_closed or parser.table_depth != 0:
        raise MalformedTable("unclosed <table> element")
    sheet = parser.sheet
    if not sheet.placed:
        raise MalformedTable("table has no cells")
    n_rows = parser.row + 1
    n_cols = max(p.col + p.colspan for p in sheet.placed)
    return sheet.finish(n_rows, n_cols)


# ---------------------------------------------------------------------------
# Markdown
# ---------------------------------------------------------------------------

_MD_DELIM_CELL = re.compile(r"^:?-+:?$")
_MD_ESCAPED_PIPE = "\x00"


def _split_md_row(line: str) -> list[str]:
    line = line.strip()
    line = line.replace("\\|", _MD_ESCAPED_PIPE)
    if line.startswith("|"):
        line = line[1:]
    if line.endswith("|"):
        line = line[:-1]
    return [part.replace(_MD_ESCAPED_PIPE, "|").strip() for part in line.split("|")]


def _is_md_delimiter(cells: list[str]) -> bool:
    return bool(cells) and all(_MD_DELIM_CELL.match(c.replace(" ", "")) for c in cells)


def parse_markdown(table_text: str) -> Grid:
    """Parse a pipe-delimited Markdown table (GFM style) into the canonical grid.

    Markdown has no span mechanism, so every cell is 1x1 and the row above
    the delimiter is flagged as the header.
    """
    lines = [ln for ln in table_text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise MalformedTable("markdown table needs a header row and a delimiter row")
    header = _split_md_row(lines[0])
    if _is_md_delimiter(header):
        raise MalformedTable("markdown table has no content rows")
    if not _is_md_delimiter(_split_md_row(lines[1])):
        raise MalformedTable("markdown table has no delimiter row")
    rows = [header] + [_split_md_row(ln) for ln in lines[2:]]
    n_cols = max(len(r) for r in rows)
    sheet = _Sheet()
    for r, row in enumerate(rows):
        for c in range(n_cols):
            content = row[c] if c < len(row) else ""
            sheet.place(_Placed(content=content, row=r, col=c, rowspan=1, colspan=1, is_header=r == 0))
    return sheet.finish(len(rows), n_cols)


# ---------------------------------------------------------------------------
# LaTeX tabular
# ---------------------------------------------------------------------------

_RULE_COMMANDS = ("hline", "toprule", "midrule", "bottomrule", "cline", "cmidrule", "specialrule")


def _strip_latex_comments(src: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\" and i + 1 < len(src):
            out.append(src[i : i + 2])
            i += 2
            continue
        if ch == "%":
            while i < len(src) and src[i] != "\n":
                i += 1
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _read_group(src: str, i: int) -> tuple[str, int]:
    """Read one {...} group starting at index i; returns (inner text, index past '}')."""
    while i < len(src) and src[i].isspace():
        i += 1
    if i >= len(src) or src[i] != "{":
        raise MalformedTable("expected '{' in LaTeX source")
    depth = 0
    j = i
    while j < len(src):
        ch = src[j]
        if ch == "\\" and j + 1 < len(src):
            j += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return src[i + 1 : j], j + 1
        j += 1
    raise MalformedTable("unbalanced braces in LaTeX source")


def _skip_optional(src: str, i: int) -> int:
    while i < len(src) and src[i].isspace():
        i += 1
    if i < len(src) and src[i] == "[":
        depth = 0
        while i < len(src):
            if src[i] == "[":
                depth += 1
            elif src[i] == "]":
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        raise MalformedTable("unbalanced [ ] in LaTeX source")
    return i


def _find_environment(src: str) -> tuple[str, str, str]:
    """Locate the first tabular/tabular* environment.

    Returns (environment name, column spec, body between the column spec
    and the matching \\end).
    """
    m = re.search(r"\\begin\{(tabular\*?)\}", src)
    if not m:
        raise MalformedTable("no tabular environment found")
    name = m.group(1)
    i = m.end()
    if name == "tabular*":
        _, i = _read_group(src, i)  # the target width
    i = _skip_optional(src, i)
    colspec, i = _read_group(src, i)
    begin_pat = re.compile(r"\\begin\{" + re.escape(name) + r"\}")
    end_pat = re.compile(r"\\end\{" + re.escape(name) + r"\}")
    depth = 1
    pos = i
    end_at = i
    while depth > 0:
        mb = begin_pat.search(src, pos)
        me = end_pat.search(src, pos)
        if me is None:
            raise MalformedTable(f"missing \\end{{{name}}}")
        if mb is not None and mb.start() < me.start():
            depth += 1
            pos = mb.end()
        else:
            depth -= 1
            pos = me.end()
            end_at = me.start()
    return name, colspec, src[i:end_at]


def _count_colspec(colspec: str) -> int:
    """Number of columns declared by a tabular column spec."""
    count = 0
    i = 0
    column_letters = set("lcrpmbXSwW")
    arg_letters = set("pmbwW")  # letters followed by a {width} argument
    while i < len(colspec):
        ch = colspec[i]
        if ch == "*":
            try:
                reps, i = _read_group(colspec, i + 1)
                inner, i = _read_group(colspec, i)
            except MalformedTable:
                break
            count += int(reps.strip() or 0) * _count_colspec(inner)
        elif ch in ("@", "!", ">", "<"):
            try:
                _, i = _read_group(colspec, i + 1)
            except MalformedTable:
                i += 1
        elif ch == "{":
            _, i = _read_group(colspec, i)
        elif ch == "[":
            close = colspec.find("]", i)
            i = close + 1 if close != -1 else len(colspec)
        elif ch in column_letters:
            count += 1
            i += 1
            if ch in arg_letters:
                try:
                    _, i = _read_group(colspec, i)
                except MalformedTable:
                    pass
            # optional [...] argument (e.g. siunitx S columns)
            while i < len(colspec) and colspec[i] == "[":
                close = colspec.find("]", i)
                i = close + 1 if close != -1 else len(colspec)
        else:
            i += 1
    return count


def _split_depth0(src: str, sep: str) -> list[str]:
    """Split on a separator that sits at brace depth 0 and environment depth 0."""
    parts: list[str] = []
    buf: list[str] = []
    depth = 0
    env_depth = 0
    i = 0
    begin_re = re.compile(r"\\begin\{[^{}]*\}")
    end_re = re.compile(r"\\end\{[^{}]*\}")
    while i < len(src):
        ch = src[i]
        if ch == "\\" and src.startswith("\\begin{", i):
            m = begin_re.match(src, i)
            if m:
                env_depth += 1
                buf.append(m.group(0))
                i = m.end()
                continue
        if ch == "\\" and src.startswith("\\end{", i):
            m = end_re.match(src, i)
            if m:
                env_depth -= 1
                buf.append(m.group(0))
                i = m.end()
                continue
        if ch == "\\" and i + 1 < len(src):
            if depth == 0 and env_depth == 0 and sep == "\\\\" and src[i + 1] == "\\":
                parts.append("".join(buf))
                buf = []
                i += 2
                # eat optional vertical-space argument after the row break
                while i < len(src) and src[i] in " \t":
                    i += 1
                if i < len(src) and src[i] == "[":
                    i = _skip_optional(src, i)
                continue
            buf.append(src[i : i + 2])
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise MalformedTable("unbalanced braces in tabular body")
        elif depth == 0 and env_depth == 0 and sep == "&" and ch == "&":
            parts.append("".join(buf))
            buf = []
            i += 1
            continue
        buf.append(ch)
        i += 1
    if depth != 0 or env_depth != 0:
        raise MalformedTable("unbalanced braces in tabular body")
    parts.append("".join(buf))
    return parts


def _strip_rules(row_src: str) -> str:
    out = row_src
    for cmd in _RULE_COMMANDS:
        pattern = re.compile(r"\\" + cmd + r"(?![a-zA-Z])")
        while True:
            m = pattern.search(out)
            if m is None:
                break
            i = m.end()
            # optional (lr)-style trim argument, then any {...} arguments
            if i < len(out) and out[i] == "(":
                close = out.find(")", i)
                i = close + 1 if close != -1 else i
            while i < len(out):
                j = i
                while j < len(out) and out[j].isspace():
                    j += 1
                if j < len(out) and out[j] == "{":
                    _, i = _read_group(out, j)
                else:
                    break
            out = out[: m.start()] + out[i:]
    return out


@dataclass
class _LatexCell:
    content: str
    rowspan: int
    colspan: int


def _parse_latex_cell(cell_src: str) -> _LatexCell:
    content = cell_src.strip()
    rowspan = 1
    colspan = 1
    changed = True
    while changed:
        changed = False
        if content.startswith("\\multicolumn"):
            n_text, i = _read_group(content, len("\\multicolumn"))
            _, i = _read_group(content, i)  # alignment
            body, i = _read_group(content, i)
            if content[i:].strip():
                break  # trailing junk after the span command: keep as-is
            try:
                colspan = max(1, int(n_text.strip()))
            except ValueError as exc:
                raise MalformedTable(f"bad multicolumn count {n_text!r}") from exc
            content = body.strip()
            changed = True
        elif content.startswith("\\multirow"):
            n_text, i = _read_group(content, len("\\multirow"))
            i = _skip_optional(content, i)  # bigstruts
            _, i = _read_group(content, i)  # width
            i = _skip_optional(content, i)  # vertical fixup
            body, i = _read_group(content, i)
            if content[i:].strip():
                break
            try:
                rowspan = max(1, abs(int(n_text.strip())))
            except ValueError as exc:
                raise MalformedTable(f"bad multirow count {n_text!r}") from exc
            content = body.strip()
            changed = True
    return _LatexCell(content=content, rowspan=rowspan, colspan=colspan)


def parse_latex(tabular_source: str) -> Grid:
    """Parse one ``tabular``/``tabular*`` environment into the canonical grid.

    ``\\multicolumn``/``\\multirow`` become spans; the empty cells a
    multirow leaves in subsequent rows are absorbed into it; rule commands
    are stripped; everything else stays verbatim as cell content.
    """
    src = _strip_latex_comments(tabular_source)
    _, colspec, body = _find_environment(src)
    declared_cols = _count_colspec(colspec)

    body = re.sub(r"\\tabularnewline(?![a-zA-Z])", r"\\\\", body)
    raw_rows = _split_depth0(body, "\\\\")
    rows: list[list[_LatexCell]] = []
    for raw in raw_rows:
        stripped = _strip_rules(raw)
        cells = [_parse_latex_cell(c) for c in _split_depth0(stripped, "&")]
        if len(cells) == 1 and not cells[0].content:
            continue  # blank line or rules-only row
        rows.append(cells)
    if not rows:
        raise MalformedTable("tabular environment has no rows")

    sheet = _Sheet()
    n_cols = declared_cols
    for r, row in enumerate(rows):
        pos = 0
        for cell in row:
            if sheet.is_taken(r, pos):
                if cell.content == "" and cell.rowspan == 1:
                    # the empty slot a multirow from above leaves behind
                    pos += cell.colspan
                    continue
                raise MalformedTable(
                    f"cell at row {r}, position {pos} overlaps a spanning cell from above"
                )
            sheet.place(
                _Placed(
                    content=cell.content,
                    row=r,
                    col=pos,
                    rowspan=cell.rowspan,
                    colspan=cell.colspan,
                )
            )
            pos += cell.colspan
        n_cols = max(n_cols, pos)
    n_cols = max(n_cols, max(p.col + p.colspan for p in sheet.placed))
    return sheet.finish(len(rows), n_cols)


# ---------------------------------------------------------------------------
# plain text
# ---------------------------------------------------------------------------

_TEXT_COLUMN_SEP = re.compile(r" {2,}|\t+")


def parse_text(table_text: str) -> Grid:
    """Whitespace-column plain text: runs of >= 2 spaces (or tabs) split columns.

    Single spaces never split, which keeps prose-like cells intact.
    """
    lines = [ln.rstrip() for ln in table_text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedTable("no content")
    rows = [_TEXT_COLUMN_SEP.split(ln.strip()) for ln in lines]
    n_cols = max(len(r) for r in rows)
    sheet = _Sheet()
    for r, row in enumerate(rows):
        for c in range(n_cols):
            content = row[c] if c < len(row) else ""
            sheet.place(_Placed(content=content, row=r, col=c, rowspan=1, colspan=1))
    return sheet.finish(len(rows), n_cols)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_PARSERS = {
    HTML_FORMAT: parse_html,
    MARKDOWN_FORMAT: parse_markdown,
    LATEX_FORMAT: parse_latex,
    TEXT_FORMAT: parse_text,
}


def sniff_format(table_text: str) -> str:
    """Best-guess format of a table snippet."""
    stripped = table_text.strip()
    if not stripped:
        return TEXT_FORMAT
    lowered = stripped.lower()
    if lowered.startswith("<table") or "<table" in lowered[:200]:
        return HTML_FORMAT
    if "\\begin{tabular" in stripped:
        return LATEX_FORMAT
    lines = [ln for ln in stripped.splitlines() if ln.strip()]
    if len(lines) >= 2 and "|" in lines[0] and _is_md_delimiter(_split_md_row(lines[1])):
        return MARKDOWN_FORMAT
    return TEXT_FORMAT


def parse_auto_with_format(table_text: str, format_hint: Optional[str] = None) -> tuple[Grid, str]:
    """Parse with an explicit format hint if given, else by sniffing.

    If the hinted or sniffed parser rejects the input, the remaining
    parsers are tried before giving up. Returns the grid together with
    the format that actually parsed it.
    """
    if not table_text or not table_text.strip():
        raise MalformedTable("empty input")
    if format_hint is not None and format_hint not in _PARSERS:
        raise ValueError(f"unknown format hint {format_hint!r}")
    order: list[str] = []
    if format_hint is not None:
        order.append(format_hint)
    sniffed = sniff_format(table_text)
    for fmt in (sniffed, HTML_FORMAT, LATEX_FORMAT, MARKDOWN_FORMAT, TEXT_FORMAT):
        if fmt not in order:
            order.append(fmt)
    last_error: Optional[MalformedTable] = None
    for fmt in order:
        try:
            return _PARSERS[fmt](table_text), fmt
        except MalformedTable as exc:
            last_error = exc
    raise MalformedTable(f"no parser accepted the input: {last_error}")


def parse_auto(table_text: str, format_hint: Optional[str] = None) -> Grid:
    """Like parse_auto_with_format, returning only the grid."""
    return parse_auto_with_format(table_text, format_hint)[0]
