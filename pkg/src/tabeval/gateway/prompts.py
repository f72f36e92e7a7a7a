"""Versioned prompt builders for the gateway operations.

Prompts are artifacts: the version string is recorded in every verdict
so downstream human-correlation studies stay attributable to the exact
wording used.
"""

from __future__ import annotations

PROMPT_VERSION = "tabeval-prompts-v1"

MATCH_BLOCK_START = "=== TABLE {table_id} ==="
MATCH_BLOCK_END = "=== END TABLE ==="
NOT_FOUND_MARKER = "NOT_FOUND"


def match_messages(gt_tables: list[tuple[str, str]], parser_output: str) -> list[dict[str, str]]:
    table_sections = "\n\n".join(
        f"--- ground truth table {tid} ---\n{latex}" for tid, latex in gt_tables
    )
    user = (
        "Below is a list of ground truth tables in LaTeX, followed by the full output "
        "of a document parser for the page containing them. For EVERY ground truth "
        "table, find the part of the parser output that represents that table and "
        "copy it out VERBATIM, character for character, without reformatting. If the "
        "parser output does not contain the table at all, answer NOT_FOUND for it.\n\n"
        f"{table_sections}\n\n"
        "--- parser output ---\n"
        f"{parser_output}\n\n"
        "Answer with one block per ground truth table, in this exact format:\n"
        f"{MATCH_BLOCK_START.format(table_id='<id>')}\n"
        "<verbatim extract or NOT_FOUND>\n"
        f"{MATCH_BLOCK_END}"
    )
    return [
        {
            "role": "system",
            "content": "You align ground truth tables with their representation in parser output. "
            "You only ever copy text verbatim from the parser output; you never invent or repair tables.",
        },
        {"role": "user", "content": user},
    ]


def judge_messages(gt_latex: str, extracted: str) -> list[dict[str, str]]:
    user = (
        "Rate how well the extracted table preserves the ground truth table on a scale "
        "from 0 to 10. Judge content accuracy and structural preservation: can every "
        "cell value be unambiguously mapped to its row and column headers, and are all "
        "values complete and correct? Representational differences (output format, "
        "markup style, symbol encoding, equivalent value formats) are NOT errors; "
        "missing, altered or misattributed values ARE.\n\n"
        "Scale anchors: 10 = all values, headers and their associations preserved; "
        "5 = substantial parts preserved but several values or associations lost or "
        "wrong; 0 = the table is missing or unusable.\n\n"
        "--- ground truth (LaTeX) ---\n"
        f"{gt_latex}\n\n"
        "--- extracted table ---\n"
        f"{extracted}\n\n"
        "Briefly explain the differences you found, then give your verdict on the "
        "final line as a single integer between 0 and 10."
    )
    return [
        {"role": "system", "content": "You are a meticulous judge of table extraction quality."},
        {"role": "user", "content": user},
    ]


JUDGE_REPAIR_MESSAGE = {
    "role": "user",
    "content": "Your previous answer did not end with a single integer between 0 and 10. "
    "Reply now with only that integer.",
}


def complexity_messages(table_latex: str) -> list[dict[str, str]]:
    user = (
        "Classify the structural complexity of this LaTeX table as exactly one of:\n"
        "simple: a regular grid, no merged cells.\n"
        "moderate: limited cell merging (multicolumn or multirow).\n"
        "complex: multi-dimensional merging or nested structures.\n\n"
        f"{table_latex}\n\n"
        "Answer with one word: simple, moderate or complex."
    )
    return [
        {"role": "system", "content": "You classify table structures."},
        {"role": "user", "content": user},
    ]


def hints_messages(gt_latex: str, extracted: str, categories: tuple[str, ...]) -> list[dict[str, str]]:
    cats = ", ".join(categories)
    user = (
        "Compare the ground truth table with the extracted table and list up to 10 "
        "concrete differences a human rater should check. Tag every difference with "
        f"exactly one category out of: {cats}.\n\n"
        "--- ground truth (LaTeX) ---\n"
        f"{gt_latex}\n\n"
        "--- extracted table ---\n"
        f"{extracted}\n\n"
        "Answer with one difference per line in the form 'category: description'. "
        "If the tables are identical, answer with an empty response."
    )
    return [
        {"role": "system", "content": "You pre-screen table pairs for subtle discrepancies."},
        {"role": "user", "content": user},
    ]
