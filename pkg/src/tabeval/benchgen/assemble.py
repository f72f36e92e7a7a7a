"""Iterative synthetic page assembly with a compile-check after every block.

Pages are built by appending content blocks (filler paragraphs or tables
from the harvested pool) and recompiling after each addition; a block
that breaks the compile, overflows the page or triggers typesetting
warnings is discarded. Tables are placed as non-floating centered
blocks, so the source order of blocks equals the reading order of the
compiled page in both column modes (two-column pages fill the left
column first, which is exactly column-major reading order).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import CompileError
from .compilecheck import CompileOutcome, LatexRunner, TableAsset
from .filler import pick_filler

PAPER_WIDTH_PT = 595.3  # a4
PAPER_HEIGHT_PT = 841.9
COLUMN_SEP_PT = 10.0
OVERSIZE_SCALE_LIMIT = 1.4  # wider than this times the column: skip, do not scale

_PAGES_RE = re.compile(r"\((\d+) pages?")
_REJECT_MARKERS = (
    "Overfull \\hbox",
    "Overfull \\vbox",
    "LaTeX Warning: Reference",
    "LaTeX Warning: Citation",
    "undefined references",
)


@dataclass(frozen=True)
class LayoutConfig:
    document_class: str
    font_family: str
    margin_pt: float
    font_size_pt: int
    line_spacing: float
    column_mode: str  # "one" | "two"

    def __post_init__(self) -> None:
        if self.column_mode not in ("one", "two"):
            raise ValueError(f"column_mode must be 'one' or 'two', got {self.column_mode!r}")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "document_class": self.document_class,
            "font_family": self.font_family,
            "margin_pt": self.margin_pt,
            "font_size_pt": self.font_size_pt,
            "line_spacing": self.line_spacing,
            "column_mode": self.column_mode,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "LayoutConfig":
        return cls(**data)


@dataclass(frozen=True)
class LayoutRanges:
    """Sampling ranges for layout configurations; defaults live here, not in code paths."""

    document_classes: tuple[str, ...] = ("article", "scrartcl")
    font_families: tuple[str, ...] = ("default", "times", "palatino")
    margin_pt: tuple[float, float] = (42.7, 85.4)  # 1.5cm to 3cm
    font_sizes_pt: tuple[int, ...] = (9, 10, 11, 12)
    line_spacing: tuple[float, float] = (1.0, 1.3)
    column_modes: tuple[str, ...] = ("one", "two")

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "LayoutRanges":
        kwargs: dict[str, Any] = {}
        for key in (
            "document_classes",
            "font_families",
            "margin_pt",
            "font_sizes_pt",
            "line_spacing",
            "column_modes",
        ):
            if key in data:
                kwargs[key] = tuple(data[key])
        return cls(**kwargs)


def sample_layout(rng: random.Random, ranges: LayoutRanges = LayoutRanges()) -> LayoutConfig:
    return LayoutConfig(
        document_class=rng.choice(ranges.document_classes),
        font_family=rng.choice(ranges.font_families),
        margin_pt=round(rng.uniform(*ranges.margin_pt), 1),
        font_size_pt=rng.choice(ranges.font_sizes_pt),
        line_spacing=round(rng.uniform(*ranges.line_spacing), 2),
        column_mode=rng.choice(ranges.column_modes),
    )


@dataclass(frozen=True)
class PageBlock:
    kind: str  # "filler" | "table"
    text: str  # filler paragraph or the table's LaTeX, verbatim
    table_id: Optional[str] = None

    def to_json_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind, "text": self.text}
        if self.table_id is not None:
            data["table_id"] = self.table_id
        return data

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "PageBlock":
        return cls(kind=data["kind"], text=data["text"], table_id=data.get("table_id"))


@dataclass
class PageGroundTruth:
    page_id: str
    layout: LayoutConfig
    blocks: list[PageBlock]
    tex: str = ""
    pdf_bytes: Optional[bytes] = field(default=None, repr=False)
    tex_path: Optional[str] = None
    pdf_path: Optional[str] = None

    @property
    def table_ids(self) -> list[str]:
        return [b.table_id for b in self.blocks if b.kind == "table" and b.table_id]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_FONT_PREAMBLE = {
    "default": "",
    "times": "\\usepackage{mathptmx}",
    "palatino": "\\usepackage{mathpazo}",
    "helvetica": "\\usepackage[scaled]{helvet}\n\\renewcommand{\\familydefault}{\\sfdefault}",
}

_PAGE_PACKAGES = ("multirow", "booktabs", "graphicx", "amsmath", "amssymb", "adjustbox", "array", "tabularx", "makecell")


def column_width_pt(layout: LayoutConfig) -> float:
    text_width = PAPER_WIDTH_PT - 2 * layout.margin_pt
    if layout.column_mode == "two":
        return (text_width - COLUMN_SEP_PT) / 2
    return text_width


def _table_block_tex(asset: TableAsset, layout: LayoutConfig) -> str:
    body = asset.latex
    if asset.width_pt > column_width_pt(layout):
        body = "\\begin{adjustbox}{width=\\columnwidth}\n" + body + "\n\\end{adjustbox}"
    return "\\begin{center}\n" + body + "\n\\end{center}"


def render_page(layout: LayoutConfig, block_texts: list[str]) -> str:
    options = [f"{layout.font_size_pt}pt"]
    if layout.column_mode == "two":
        options.append("twocolumn")
    packages = "\n".join(f"\\usepackage{{{p}}}" for p in _PAGE_PACKAGES)
    font = _FONT_PREAMBLE.get(layout.font_family, "")
    parts = [
        f"\\documentclass[{','.join(options)}]{{{layout.document_class}}}",
        f"\\usepackage[a4paper,margin={layout.margin_pt}pt]{{geometry}}",
        packages,
    ]
    if font:
        parts.append(font)
    parts.append(f"\\linespread{{{layout.line_spacing}}}")
    parts.append("\\pagestyle{empty}")
    parts.append("\\begin{document}")
    parts.extend(block_texts)
    parts.append("\\end{document}")
    return "\n\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _acceptable(outcome: CompileOutcome) -> bool:
    if not outcome.ok:
        return False
    m = _PAGES_RE.search(outcome.log)
    if m and int(m.group(1)) > 1:
        return False
    return not any(marker in outcome.log for marker in _REJECT_MARKERS)


def _estimate_filler_height(text: str, layout: LayoutConfig) -> float:
    chars_per_line = max(20.0, column_width_pt(layout) / (0.5 * layout.font_size_pt))
    lines = math.ceil(len(text) / chars_per_line)
    return lines * layout.font_size_pt * 1.2 * layout.line_spacing + layout.font_size_pt


def assemble_page(
    pool: list[TableAsset],
    layout: LayoutConfig,
    rng_seed: int,
    runner: LatexRunner,
    *,
    page_id: str,
    table_density: float = 0.45,
    max_blocks: int = 40,
    stop_after_rejects: int = 4,
) -> PageGroundTruth:
    """Build one page by iterative block appending with recompile checks.

    Identical (pool, layout, seed) inputs produce byte-identical tex: the
    only randomness is the seeded RNG, and block acceptance is a pure
    function of the runner's verdicts.
    """
    if not pool:
        raise ValueError("table pool must be non-empty")
    rng = random.Random(rng_seed)

    skeleton = render_page(layout, [])
    base = runner(skeleton)
    if not base.ok:
        raise CompileError(f"page skeleton does not compile: {base.log[-500:]}")

    col_width = column_width_pt(layout)
    usable_height = PAPER_HEIGHT_PT - 2 * layout.margin_pt
    if layout.column_mode == "two":
        usable_height *= 2  # two columns of content fit per page
    remaining = usable_height

    available = list(pool)
    blocks: list[PageBlock] = []
    block_texts: list[str] = []
    last_outcome = base
    consecutive_rejects = 0

    while len(blocks) < max_blocks and consecutive_rejects < stop_after_rejects:
        placeable = [
            a
            for a in available
            if a.height_pt <= remaining and a.width_pt <= OVERSIZE_SCALE_LIMIT * col_width
        ]
        want_table = placeable and rng.random() < table_density
        if want_table:
            asset = rng.choice(placeable)
            candidate_block = PageBlock(kind="table", text=asset.latex, table_id=asset.asset_id)
            candidate_tex = _table_block_tex(asset, layout)
            est_height = asset.height_pt + 2 * layout.font_size_pt
        else:
            text = pick_filler(rng)
            candidate_block = PageBlock(kind="filler", text=text)
            candidate_tex = text
            est_height = _estimate_filler_height(text, layout)

        outcome = runner(render_page(layout, block_texts + [candidate_tex]))
        if _acceptable(outcome):
            blocks.append(candidate_block)
            block_texts.append(candidate_tex)
            if want_table:
                available.remove(asset)
            remaining -= est_height
            last_outcome = outcome
            consecutive_rejects = 0
        else:
            if want_table:
                available.remove(asset)  # does not fit this page, stop retrying it
            consecutive_rejects += 1
        if remaining <= 2 * layout.font_size_pt:
            break

    tex = render_page(layout, block_texts)
    return PageGroundTruth(
        page_id=page_id,
        layout=layout,
        blocks=blocks,
        tex=tex,
        pdf_bytes=last_outcome.pdf_bytes,
    )
