"""Benchmark orchestration: ingest parser outputs, match, score, aggregate.

One ScoreRecord per (parser, ground-truth table): the rule metrics, the
judge score and the match validation tag. A table the parser did not
emit at all is a miss and scores zero on everything, so leaderboard
means reflect detection failures, not just extraction quality.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from .errors import EndpointError, MalformedTable
from .gateway.client import LlmClient
from .gateway.ops import MatchRecord, VALIDATION_UNVERIFIED, judge_pair, match_tables
from .grid import Grid
from .grits import GRITS_CON, GRITS_TOP, grits
from .parsing import parse_auto_with_format, parse_latex
from .score import score_metric
from .teds import teds

log = logging.getLogger(__name__)

_EXTENSION_HINTS = {
    ".md": "markdown",
    ".markdown": "markdown",
    ".html": "html",
    ".htm": "html",
    ".tex": "latex",
    ".txt": None,  # catch-all extension: sniff the content
}

STRUCTURED_FORMATS = ("html", "markdown", "latex")


@dataclass(frozen=True)
class GtTable:
    page_id: str
    table_id: str
    latex: str
    complexity: str


@dataclass(frozen=True)
class ParserOutput:
    text: str
    format_hint: Optional[str] = None


@dataclass
class RuleScores:
    teds: float
    grits_top: float
    grits_con: float
    grits_avg: float
    score_index: float
    score_content: float
    score_avg: float


@dataclass
class ScoreRecord:
    parser_id: str
    page_id: str
    gt_table_id: str
    complexity: str
    validation: str
    miss: bool
    malformed: bool = False
    pred_format: Optional[str] = None
    teds: Optional[float] = None
    grits_top: float = 0.0
    grits_con: float = 0.0
    grits_avg: float = 0.0
    score_index: float = 0.0
    score_content: float = 0.0
    score_avg: float = 0.0
    judge: Optional[int] = None
    judge_flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def pair_id(self) -> str:
        return f"{self.parser_id}/{self.page_id}/{self.gt_table_id}"

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "parser_id": self.parser_id,
            "page_id": self.page_id,
            "gt_table_id": self.gt_table_id,
            "complexity": self.complexity,
            "validation": self.validation,
            "miss": self.miss,
            "malformed": self.malformed,
            "pred_format": self.pred_format,
            "teds": self.teds,
            "grits_top": self.grits_top,
            "grits_con": self.grits_con,
            "grits_avg": self.grits_avg,
            "score_index": self.score_index,
            "score_content": self.score_content,
            "score_avg": self.score_avg,
            "judge": self.judge,
            "judge_flags": list(self.judge_flags),
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "ScoreRecord":
        data = dict(data)
        data["judge_flags"] = tuple(data.get("judge_flags", ()))
        return cls(**data)


def write_records(records: Iterable[ScoreRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")


def read_records(path: str | Path) -> list[ScoreRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(ScoreRecord.from_json_dict(json.loads(line)))
    return records


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


def ingest_outputs(root: str | Path) -> dict[tuple[str, str], ParserOutput]:
    """Read outputs/<parser>/<page>.<ext> into a map keyed by (parser, page).

    The extension is kept as a format hint for parse_auto; pages without
    a file are simply absent from the map.
    """
    root = Path(root)
    outputs: dict[tuple[str, str], ParserOutput] = {}
    if not root.exists():
        return outputs
    for parser_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for page_file in sorted(p for p in parser_dir.iterdir() if p.is_file()):
            try:
                text = page_file.read_text(encoding="utf-8", errors="replace")
            except OSError as exc:
                log.warning("skipping unreadable output %s: %s", page_file, exc)
                continue
            hint = _EXTENSION_HINTS.get(page_file.suffix.lower())
            outputs[(parser_dir.name, page_file.stem)] = ParserOutput(text=text, format_hint=hint)
    return outputs


# ---------------------------------------------------------------------------
# scoring
# ---------------------------------------------------------------------------


def score_pair(gt: Grid, pred: Grid, tolerance: int = 1) -> RuleScores:
    """All rule-based metrics for one grid pair."""
    top = grits(gt, pred, GRITS_TOP)
    con = grits(gt, pred, GRITS_CON)
    pair = score_metric(gt, pred, tolerance)
    return RuleScores(
        teds=teds(gt, pred).score,
        grits_top=top.f_score,
        grits_con=con.f_score,
        grits_avg=(top.f_score + con.f_score) / 2,
        score_index=pair.index_accuracy,
        score_content=pair.content_accuracy,
        score_avg=pair.average,
    )


def _miss_record(gt: GtTable, parser_id: str, validation: str) -> ScoreRecord:
    return ScoreRecord(
        parser_id=parser_id,
        page_id=gt.page_id,
        gt_table_id=gt.table_id,
        complexity=gt.complexity,
        validation=validation,
        miss=True,
        teds=0.0,
        judge=0,
    )


def _score_match(
    gt: GtTable,
    match: MatchRecord,
    client: Optional[LlmClient],
    *,
    judge: bool,
    tolerance: int,
    format_hint: Optional[str] = None,
) -> ScoreRecord:
    if match.extracted_text is None:
        return _miss_record(gt, match.parser_id, match.validation)
    record = ScoreRecord(
        parser_id=match.parser_id,
        page_id=gt.page_id,
        gt_table_id=gt.table_id,
        complexity=gt.complexity,
        validation=match.validation,
        miss=False,
    )
    try:
        gt_grid = parse_latex(gt.latex)
        pred_grid, pred_format = parse_auto_with_format(match.extracted_text, format_hint)
        record.pred_format = pred_format
        scores = score_pair(gt_grid, pred_grid, tolerance)
        record.teds = scores.teds
        record.grits_top = scores.grits_top
        record.grits_con = scores.grits_con
        record.grits_avg = scores.grits_avg
        record.score_index = scores.score_index
        record.score_content = scores.score_content
        record.score_avg = scores.score_avg
    except MalformedTable as exc:
        log.info("pair %s unparseable (%s); rule metrics zeroed", record.pair_id, exc)
        record.malformed = True
        record.teds = 0.0
    if judge and client is not None:
        verdict = judge_pair(gt.latex, match.extracted_text, client)
        if verdict is None:
            record.judge_flags = ("judge-unparseable",)
        else:
            record.judge = verdict.score
            record.judge_flags = verdict.flags
    return record


def run_benchmark(
    gt_tables: list[GtTable],
    outputs: Mapping[tuple[str, str], ParserOutput],
    client: Optional[LlmClient],
    *,
    judge: bool = True,
    workers: int = 4,
    tolerance: int = 1,
) -> list[ScoreRecord]:
    """Match and score every (parser, ground-truth table) combination.

    The gateway client drives matching (and judging when enabled); with a
    warmed response cache the whole run is deterministic and issues no
    HTTP requests. Per-pair parse failures degrade to zeroed rule
    metrics, never abort the run.
    """
    if client is None:
        raise ValueError("a gateway client is required for table matching")
    by_page: dict[str, list[GtTable]] = {}
    for gt in gt_tables:
        by_page.setdefault(gt.page_id, []).append(gt)
    parsers = sorted({parser_id for parser_id, _ in outputs})

    tasks: list[tuple[str, str]] = [
        (parser_id, page_id) for parser_id in parsers for page_id in sorted(by_page)
    ]

    def handle(task: tuple[str, str]) -> list[ScoreRecord]:
        parser_id, page_id = task
        tables = by_page[page_id]
        output = outputs.get((parser_id, page_id))
        if output is None or not output.text.strip():
            return [_miss_record(gt, parser_id, VALIDATION_UNVERIFIED) for gt in tables]
        try:
            matches = match_tables(
                [(gt.table_id, gt.latex) for gt in tables],
                output.text,
                client,
                parser_id=parser_id,
                page_id=page_id,
            )
        except EndpointError:
            if judge:
                raise  # a live run was requested; losing the endpoint is fatal
            # offline rule-metric run: score what the cache can match
            log.warning(
                "endpoint unavailable while matching %s/%s in offline mode; page marked unverified",
                parser_id,
                page_id,
            )
            return [_miss_record(gt, parser_id, VALIDATION_UNVERIFIED) for gt in tables]
        by_id = {m.gt_table_id: m for m in matches}
        return [
            _score_match(
                gt,
                by_id[gt.table_id],
                client,
                judge=judge,
                tolerance=tolerance,
                format_hint=output.format_hint,
            )
            for gt in tables
        ]

    records: list[ScoreRecord] = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for chunk in pool.map(handle, tasks):
            records.extend(chunk)
    records.sort(key=lambda r: (r.parser_id, r.page_id, r.gt_table_id))
    return records


# ---------------------------------------------------------------------------
# leaderboard
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeaderboardRow:
    parser_id: str
    overall: Optional[float]
    by_complexity: dict[str, Optional[float]]
    counts: dict[str, int]
    mean_teds: Optional[float]
    n_tables: int
    n_judged: int


def _mean(values: list[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


def build_leaderboard(records: list[ScoreRecord]) -> list[LeaderboardRow]:
    """Aggregate records into ranked rows, misses included as zeros.

    The TEDS column is not applicable for parsers whose extractions never
    contained tabular structure (plain text only); judge means skip
    records without a judge value (judge disabled or unparseable).
    """
    if not records:
        raise ValueError("no records to aggregate")
    by_parser: dict[str, list[ScoreRecord]] = {}
    for record in records:
        by_parser.setdefault(record.parser_id, []).append(record)
    rows = []
    for parser_id, recs in by_parser.items():
        judged = [r.judge for r in recs if r.judge is not None]
        overall = _mean([float(j) for j in judged])
        complexities = sorted({r.complexity for r in recs})
        by_complexity = {
            c: _mean([float(r.judge) for r in recs if r.complexity == c and r.judge is not None])
            for c in complexities
        }
        counts = {c: sum(1 for r in recs if r.complexity == c) for c in complexities}
        has_structure = any(
            not r.miss and r.pred_format in STRUCTURED_FORMATS for r in recs
        )
        mean_teds = _mean([r.teds for r in recs if r.teds is not None]) if has_structure else None
        rows.append(
            LeaderboardRow(
                parser_id=parser_id,
                overall=overall,
                by_complexity=by_complexity,
                counts=counts,
                mean_teds=mean_teds,
                n_tables=len(recs),
                n_judged=len(judged),
            )
        )
    rows.sort(key=lambda row: (row.overall is not None, row.overall or 0.0), reverse=True)
    return rows


def leaderboard_markdown(rows: list[LeaderboardRow]) -> str:
    """Markdown table in the leaderboard layout: judge columns, then TEDS."""
    complexities = sorted({c for row in rows for c in row.by_complexity})
    header = ["Parser", "Overall"] + [c.capitalize() for c in complexities] + ["TEDS", "Tables"]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]

    def fmt(value: Optional[float], digits: int = 2) -> str:
        return "--" if value is None else f"{value:.{digits}f}"

    for row in rows:
        cells = [row.parser_id, fmt(row.overall)]
        cells += [fmt(row.by_complexity.get(c)) for c in complexities]
        cells += [fmt(row.mean_teds), str(row.n_tables)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def leaderboard_csv(rows: list[LeaderboardRow]) -> str:
    complexities = sorted({c for row in rows for c in row.by_complexity})
    header = ["parser_id", "overall"] + [f"judge_{c}" for c in complexities] + [
        "mean_teds",
        "n_tables",
        "n_judged",
    ] + [f"n_{c}" for c in complexities]
    out = [",".join(header)]
    for row in rows:
        cells = [row.parser_id, _csv_num(row.overall)]
        cells += [_csv_num(row.by_complexity.get(c)) for c in complexities]
        cells += [_csv_num(row.mean_teds), str(row.n_tables), str(row.n_judged)]
        cells += [str(row.counts.get(c, 0)) for c in complexities]
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def _csv_num(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"
