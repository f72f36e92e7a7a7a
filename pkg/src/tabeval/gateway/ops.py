"""Gateway operations: table matching, judging, classification, hint generation.

Model output is never trusted as-is. Matches go through rule-based
post-validation against the raw parser output; judge scores go through a
tolerant integer extractor with clamping; hints and class labels are
validated against closed vocabularies.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Optional

from ..complexity import COMPLEXITY_LABELS, heuristic_complexity
from ..errors import EndpointError, ProtocolError
from ..textsim import normalize_text
from . import prompts
from .client import LlmClient

log = logging.getLogger(__name__)

VALIDATION_VERBATIM = "verbatim"
VALIDATION_WHITESPACE = "whitespace-corrected"
VALIDATION_FUZZY = "fuzzy-located"
VALIDATION_UNVERIFIED = "unverified"

HINT_CATEGORIES = (
    "structural reorganization",
    "symbol encoding",
    "value equivalence",
    "markup artifact",
    "content error",
)

_FUZZY_LINE_THRESHOLD = 0.9


@dataclass(frozen=True)
class MatchRecord:
    """Alignment of one ground-truth table with a parser's page output."""

    gt_table_id: str
    parser_id: str
    page_id: str
    extracted_text: Optional[str]
    validation: str
    char_span: Optional[tuple[int, int]] = None

    @property
    def is_miss(self) -> bool:
        return self.extracted_text is None


@dataclass(frozen=True)
class JudgeVerdict:
    score: int
    rationale: str
    judge_model: str
    prompt_version: str
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.score <= 10:
            raise ValueError(f"judge score {self.score} outside 0-10")


@dataclass(frozen=True)
class ComplexityResult:
    label: str
    source: str  # "llm" or "heuristic"


@dataclass(frozen=True)
class Hint:
    category: str
    text: str


# ---------------------------------------------------------------------------
# post-validation
# ---------------------------------------------------------------------------


def _collapse_with_map(s: str) -> tuple[str, list[int]]:
    """Whitespace-collapsed copy of ``s`` plus a map back to original indices."""
    out: list[str] = []
    positions: list[int] = []
    in_ws = False
    for i, ch in enumerate(s):
        if ch.isspace():
            in_ws = True
            continue
        if in_ws and out:
            out.append(" ")
            positions.append(i - 1)
        in_ws = False
        out.append(ch)
        positions.append(i)
    return "".join(out), positions


def post_validate(candidate: str, parser_output: str) -> tuple[str, Optional[tuple[int, int]], Optional[str]]:
    """Locate a model-returned table inside the raw parser output.

    Returns (validation tag, char span, corrected text). The corrected
    text is always re-extracted from the parser output, so anything other
    than ``unverified`` is guaranteed to be a genuine (whitespace-modulo)
    substring of the output.
    """
    if not candidate.strip():
        raise ValueError("candidate must be non-empty")

    # (1) exact substring
    at = parser_output.find(candidate)
    if at != -1:
        return VALIDATION_VERBATIM, (at, at + len(candidate)), candidate

    # (2) match after collapsing whitespace on both sides
    collapsed_out, positions = _collapse_with_map(parser_output)
    collapsed_cand, _ = _collapse_with_map(candidate)
    if collapsed_cand:
        at = collapsed_out.find(collapsed_cand)
        if at != -1:
            start = positions[at]
            end = positions[at + len(collapsed_cand) - 1] + 1
            return VALIDATION_WHITESPACE, (start, end), parser_output[start:end]

    # (3) window anchored on the candidate's longest line
    cand_lines = [ln for ln in candidate.splitlines()]
    stripped_cand = [ln.strip() for ln in cand_lines]
    anchor_idx = max(range(len(cand_lines)), key=lambda i: len(stripped_cand[i]))
    anchor = stripped_cand[anchor_idx]
    if anchor:
        out_lines = parser_output.splitlines(keepends=True)
        out_stripped = [ln.strip() for ln in out_lines]
        best: Optional[tuple[float, int, int]] = None
        for k, line in enumerate(out_stripped):
            if line != anchor:
                continue
            lo = k - anchor_idx
            hi = lo + len(cand_lines)
            if lo < 0 or hi > len(out_lines):
                continue
            matched = sum(
                1
                for c, o in zip(stripped_cand, out_stripped[lo:hi])
                if normalize_text(c) == normalize_text(o)
            )
            ratio = matched / len(cand_lines)
            if best is None or ratio > best[0]:
                best = (ratio, lo, hi)
        if best is not None and best[0] >= _FUZZY_LINE_THRESHOLD:
            _, lo, hi = best
            start = sum(len(ln) for ln in out_lines[:lo])
            end = start + sum(len(ln) for ln in out_lines[lo:hi])
            text = parser_output[start:end]
            if text.endswith("\n"):
                end -= 1
                text = text[:-1]
            return VALIDATION_FUZZY, (start, end), text

    return VALIDATION_UNVERIFIED, None, None


# ---------------------------------------------------------------------------
# matching
# ---------------------------------------------------------------------------

_BLOCK_RE = re.compile(
    r"^===\s*TABLE\s+(?P<id>\S+)\s*===\s*\n(?P<body>.*?)\n?^===\s*END TABLE\s*===",
    re.MULTILINE | re.DOTALL,
)


def _parse_match_blocks(text: str, expected_ids: list[str]) -> dict[str, str]:
    blocks = {m.group("id"): m.group("body") for m in _BLOCK_RE.finditer(text)}
    if not blocks:
        raise ProtocolError("no table blocks found in the matcher response")
    missing = [tid for tid in expected_ids if tid not in blocks]
    if missing:
        raise ProtocolError(f"matcher response lacks blocks for tables {missing}")
    return blocks


def match_tables(
    gt_tables: list[tuple[str, str]],
    parser_output: str,
    client: LlmClient,
    *,
    parser_id: str = "",
    page_id: str = "",
) -> list[MatchRecord]:
    """Align every ground-truth table of a page with the parser output.

    One model call covers the whole page. Every candidate the model
    returns must survive post-validation; anything unresolved downgrades
    to an explicit miss with the ``unverified`` tag.
    """
    if not gt_tables:
        raise ValueError("gt_tables must be non-empty")
    if not parser_output.strip():
        raise ValueError("parser_output must be non-empty")
    ids = [tid for tid, _ in gt_tables]
    messages = prompts.match_messages(gt_tables, parser_output)
    response = client.complete(messages)
    try:
        blocks = _parse_match_blocks(response, ids)
    except ProtocolError:
        repair = messages + [
            {"role": "assistant", "content": response},
            {
                "role": "user",
                "content": "That response was not in the required block format. "
                "Answer again using exactly one '=== TABLE <id> ===' ... '=== END TABLE ===' "
                "block per ground truth table.",
            },
        ]
        try:
            blocks = _parse_match_blocks(client.complete(repair), ids)
        except ProtocolError:
            log.warning("matcher response unusable for page %s; marking all tables unverified", page_id)
            return [
                MatchRecord(tid, parser_id, page_id, None, VALIDATION_UNVERIFIED) for tid in ids
            ]

    records: list[MatchRecord] = []
    for tid in ids:
        body = blocks[tid].strip()
        if not body or body.upper() == prompts.NOT_FOUND_MARKER:
            records.append(MatchRecord(tid, parser_id, page_id, None, VALIDATION_UNVERIFIED))
            continue
        tag, span, corrected = post_validate(body, parser_output)
        if tag == VALIDATION_UNVERIFIED:
            records.append(MatchRecord(tid, parser_id, page_id, None, VALIDATION_UNVERIFIED))
        else:
            records.append(MatchRecord(tid, parser_id, page_id, corrected, tag, span))
    return records


# ---------------------------------------------------------------------------
# judging
# ---------------------------------------------------------------------------

_INT_RE = re.compile(r"-?\d+")


def _extract_score(text: str) -> Optional[int]:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        return None
    m = _INT_RE.search(lines[-1])
    if m is None:
        return None
    return int(m.group(0))


def judge_pair(gt_latex: str, extracted: str, client: LlmClient) -> Optional[JudgeVerdict]:
    """Score one table pair on the 0-10 rubric.

    Returns None when even the repair retry fails to produce a score;
    such pairs are flagged for manual review by the caller. Out-of-range
    scores are clamped and flagged, never dropped.
    """
    if not gt_latex.strip() or not extracted.strip():
        raise ValueError("both tables must be non-empty; misses are scored upstream")
    messages = prompts.judge_messages(gt_latex, extracted)
    response = client.complete(messages)
    score = _extract_score(response)
    if score is None:
        repair = messages + [
            {"role": "assistant", "content": response},
            prompts.JUDGE_REPAIR_MESSAGE,
        ]
        response = client.complete(repair)
        score = _extract_score(response)
        if score is None:
            log.warning("judge response unparseable twice; verdict absent")
            return None
    flags: tuple[str, ...] = ()
    if score < 0 or score > 10:
        flags = ("clamped",)
        score = min(10, max(0, score))
    return JudgeVerdict(
        score=score,
        rationale=response,
        judge_model=client.cfg.model,
        prompt_version=prompts.PROMPT_VERSION,
        flags=flags,
    )


# ---------------------------------------------------------------------------
# classification and hints
# ---------------------------------------------------------------------------


def classify_complexity(table_latex: str, client: Optional[LlmClient]) -> ComplexityResult:
    """LLM complexity label with a deterministic fallback.

    The heuristic takes over whenever no client is configured, the
    endpoint fails, or the answer does not name a known class.
    """
    if client is not None:
        try:
            answer = client.complete(prompts.complexity_messages(table_latex)).strip().lower()
            for label in COMPLEXITY_LABELS:
                if label in answer:
                    return ComplexityResult(label=label, source="llm")
            log.warning("classifier answered %r; falling back to heuristic", answer[:80])
        except (EndpointError, ProtocolError) as exc:
            log.warning("classifier endpoint unavailable (%s); falling back to heuristic", exc)
    return ComplexityResult(label=heuristic_complexity(table_latex), source="heuristic")


_HINT_LINE = re.compile(r"^\s*[-*\d.)\s]*(?P<cat>[a-zA-Z ]+?)\s*:\s*(?P<text>.+)$")


def generate_hints(gt_latex: str, extracted: str, client: LlmClient) -> list[Hint]:
    """Up to 10 tagged discrepancy descriptions for the annotation UI.

    Endpoint failures degrade to an empty list; the UI works without hints.
    """
    if not gt_latex.strip() or not extracted.strip():
        raise ValueError("both tables must be non-empty")
    try:
        response = client.complete(prompts.hints_messages(gt_latex, extracted, HINT_CATEGORIES))
    except (EndpointError, ProtocolError) as exc:
        log.warning("hint generation unavailable (%s); continuing without hints", exc)
        return []
    hints: list[Hint] = []
    for line in response.splitlines():
        m = _HINT_LINE.match(line)
        if not m:
            continue
        category = m.group("cat").strip().lower()
        if category not in HINT_CATEGORIES:
            continue
        hints.append(Hint(category=category, text=m.group("text").strip()))
        if len(hints) == 10:
            break
    return hints
