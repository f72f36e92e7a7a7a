"""Shared test infrastructure: fixture loading, cache seeding, fake runners."""

from __future__ import annotations

import json
from pathlib import Path

import httpx

from tabeval.benchgen.compilecheck import CompileOutcome
from tabeval.gateway import LlmClient, LlmEndpointConfig
from tabeval.gateway.client import prompt_key

FIXTURES = Path(__file__).parent / "fixtures"

BLINDSPOT_GT = (FIXTURES / "blindspot_gt.tex").read_text(encoding="utf-8").strip()
BLINDSPOT_PRED = (FIXTURES / "blindspot_pred.md").read_text(encoding="utf-8").strip()
BLINDSPOT_FAITHFUL = (FIXTURES / "blindspot_faithful.md").read_text(encoding="utf-8").strip()
BLINDSPOT_GARBLED = (FIXTURES / "blindspot_garbled.md").read_text(encoding="utf-8").strip()


def seed_cache(cfg: LlmEndpointConfig, messages: list[dict], response_text: str, temperature: float = 0.0) -> Path:
    """Pin a transcript into the response cache exactly as the client would."""
    key = prompt_key(cfg.model, messages, temperature)
    model_dir = cfg.model.replace("/", "_").replace(":", "_")
    path = Path(cfg.cache_dir) / model_dir / f"{key}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(
            {
                "model": cfg.model,
                "messages": messages,
                "temperature": temperature,
                "response_text": response_text,
            },
            ensure_ascii=False,
        ),
        encoding="utf-8",
    )
    return path


def cache_only_client(cfg: LlmEndpointConfig) -> LlmClient:
    """A client whose every network attempt fails: cache misses are loud."""
    transport = httpx.MockTransport(lambda request: httpx.Response(500))
    return LlmClient(cfg, transport=transport, backoff=0.0)


class SimulatedLatexRunner:
    """Deterministic stand-in for pdflatex driven by a body-line budget."""

    def __init__(self, budget_lines: int = 60, fail_marker: str = "\\undefinedcmd"):
        self.budget_lines = budget_lines
        self.fail_marker = fail_marker
        self.calls = 0

    def __call__(self, tex_source: str) -> CompileOutcome:
        self.calls += 1
        if self.fail_marker in tex_source:
            return CompileOutcome(ok=False, log="! Undefined control sequence.")
        body = tex_source.split("\\begin{document}")[1]
        n_lines = sum(max(1, len(ln) // 90 + 1) for ln in body.splitlines() if ln.strip())
        if "tbmeasure" in tex_source:
            log = "TABLE-WIDTH=144.5pt\nTABLE-HEIGHT=40.0pt\nOutput written on doc.pdf (1 page"
            return CompileOutcome(ok=True, log=log, pdf_bytes=b"%PDF-sim")
        if n_lines > self.budget_lines:
            log = "Overfull \\vbox (12.0pt too high)\nOutput written on doc.pdf (2 pages"
            return CompileOutcome(ok=True, log=log, pdf_bytes=b"%PDF-sim")
        return CompileOutcome(ok=True, log="Output written on doc.pdf (1 page", pdf_bytes=b"%PDF-sim")
