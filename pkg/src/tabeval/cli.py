"""Command-line interface for the benchmark harness.

Subcommands cover the whole pipeline: harvest tables, generate pages,
ingest parser outputs, match, score, aggregate the leaderboard, run the
meta-evaluation statistics and serve the annotation backend.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import random
import sys
from pathlib import Path
from typing import Optional

from .benchgen import (
    LayoutRanges,
    PdflatexRunner,
    TableAsset,
    TableRejection,
    assemble_page,
    clean_table,
    emit_ground_truth,
    extract_tabulars,
    load_ground_truth,
    sample_layout,
    validate_standalone,
)
from .errors import CleanFailure, DegenerateInput, JoinEmpty
from .gateway import LlmClient, LlmEndpointConfig, classify_complexity, generate_hints, match_tables
from .harness import (
    GtTable,
    build_leaderboard,
    ingest_outputs,
    leaderboard_csv,
    leaderboard_markdown,
    read_records,
    run_benchmark,
    write_records,
)
from .stats import agreement, load_ratings_jsonl, metric_vs_human

log = logging.getLogger("tabeval")

METRIC_SCALES = {
    "teds": (0.0, 1.0),
    "grits_top": (0.0, 1.0),
    "grits_con": (0.0, 1.0),
    "grits_avg": (0.0, 1.0),
    "score_index": (0.0, 1.0),
    "score_content": (0.0, 1.0),
    "score_avg": (0.0, 1.0),
    "judge": (0.0, 10.0),
}


def add_gateway_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--base-url", default="http://localhost:8080/v1", help="chat-completions endpoint base URL")
    parser.add_argument("--model", default="gpt-4o-mini", help="model identifier")
    parser.add_argument("--api-key-env", default="TABEVAL_API_KEY", help="env var holding the API token")
    parser.add_argument("--cache-dir", default="cache", help="response cache directory")
    parser.add_argument("--max-concurrent", type=int, default=4)
    parser.add_argument("--retries", type=int, default=3)
    parser.add_argument("--timeout", type=float, default=120.0)


def gateway_client(args: argparse.Namespace) -> LlmClient:
    cfg = LlmEndpointConfig(
        base_url=args.base_url,
        model=args.model,
        api_key_env=args.api_key_env,
        max_concurrent=args.max_concurrent,
        max_retries=args.retries,
        timeout=args.timeout,
        cache_dir=args.cache_dir,
    )
    return LlmClient(cfg)


def gt_tables_from_manifest(manifest_path: str | Path) -> list[GtTable]:
    pages, assets = load_ground_truth(manifest_path)
    tables = []
    for page in pages:
        for tid in page.table_ids:
            asset = assets.get(tid)
            if asset is None:
                log.warning("table %s on page %s missing from the asset index", tid, page.page_id)
                continue
            tables.append(
                GtTable(page_id=page.page_id, table_id=tid, latex=asset.latex, complexity=asset.complexity)
            )
    return tables


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_harvest(args: argparse.Namespace) -> int:
    runner = PdflatexRunner()
    raws = extract_tabulars(args.source)
    log.info("found %d top-level tabular environments", len(raws))
    client = gateway_client(args) if args.llm_classify else None
    assets: dict[str, dict] = {}
    rejections: list[dict] = []
    for i, raw in enumerate(raws):
        asset_id = f"tbl{i:04d}"
        try:
            cleaned = clean_table(raw)
        except CleanFailure as exc:
            rejections.append({"asset_id": asset_id, "reason": f"clean failure: {exc}"})
            continue
        result = validate_standalone(cleaned, runner, asset_id=asset_id)
        if isinstance(result, TableRejection):
            rejections.append(dataclasses.asdict(result))
            continue
        complexity = classify_complexity(cleaned, client)
        assets[asset_id] = {
            "latex": result.latex,
            "width_pt": result.width_pt,
            "height_pt": result.height_pt,
            "complexity": complexity.label,
            "complexity_source": complexity.source,
            "origin": result.origin,
        }
    out = {"assets": assets, "rejections": rejections}
    Path(args.out).write_text(json.dumps(out, indent=2, ensure_ascii=False), encoding="utf-8")
    log.info("kept %d assets, rejected %d; wrote %s", len(assets), len(rejections), args.out)
    return 0


def load_assets(path: str | Path) -> dict[str, TableAsset]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        aid: TableAsset(
            asset_id=aid,
            latex=a["latex"],
            width_pt=a["width_pt"],
            height_pt=a["height_pt"],
            complexity=a["complexity"],
            origin=a.get("origin", ""),
        )
        for aid, a in data["assets"].items()
    }


def cmd_gen_pages(args: argparse.Namespace) -> int:
    runner = PdflatexRunner()
    assets = load_assets(args.assets)
    ranges = LayoutRanges()
    density = 0.45
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        ranges = LayoutRanges.from_json_dict(config.get("layout", {}))
        density = config.get("table_density", density)
    rng = random.Random(args.seed)
    pool = [assets[aid] for aid in sorted(assets)]
    pages = []
    for i in range(args.pages):
        if not pool:
            log.info("table pool exhausted after %d pages", i)
            break
        layout = sample_layout(rng, ranges)
        page = assemble_page(
            pool,
            layout,
            rng_seed=rng.randrange(2**32),
            runner=runner,
            page_id=f"page{i:03d}",
            table_density=density,
        )
        pages.append(page)
        used = set(page.table_ids)
        pool = [a for a in pool if a.asset_id not in used]
    manifest = emit_ground_truth(pages, args.out, assets=assets)
    log.info("wrote %d pages and %s", len(pages), manifest)
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    outputs = ingest_outputs(args.outputs)
    index = {
        f"{parser}/{page}": {"chars": len(out.text), "format_hint": out.format_hint}
        for (parser, page), out in sorted(outputs.items())
    }
    text = json.dumps(index, indent=2)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text)
    log.info("ingested %d parser/page outputs", len(outputs))
    return 0


def cmd_match(args: argparse.Namespace) -> int:
    gt_tables = gt_tables_from_manifest(args.manifest)
    outputs = ingest_outputs(args.outputs)
    client = gateway_client(args)
    by_page: dict[str, list[GtTable]] = {}
    for gt in gt_tables:
        by_page.setdefault(gt.page_id, []).append(gt)
    match_lines = []
    pair_lines = []
    for (parser_id, page_id), output in sorted(outputs.items()):
        tables = by_page.get(page_id)
        if not tables or not output.text.strip():
            continue
        records = match_tables(
            [(t.table_id, t.latex) for t in tables], output.text, client,
            parser_id=parser_id, page_id=page_id,
        )
        for gt, record in zip(tables, records):
            match_lines.append(json.dumps(dataclasses.asdict(record), ensure_ascii=False))
            if args.pairs_out and record.extracted_text:
                hints = []
                if args.hints:
                    hints = [dataclasses.asdict(h) for h in generate_hints(gt.latex, record.extracted_text, client)]
                pair_lines.append(
                    json.dumps(
                        {
                            "pair_id": f"{parser_id}/{page_id}/{gt.table_id}",
                            "gt_latex": gt.latex,
                            "extracted_text": record.extracted_text,
                            "extracted_format": output.format_hint,
                            "hints": hints,
                        },
                        ensure_ascii=False,
                    )
                )
    Path(args.out).write_text("\n".join(match_lines) + "\n", encoding="utf-8")
    log.info("wrote %d match records to %s", len(match_lines), args.out)
    if args.pairs_out:
        Path(args.pairs_out).write_text("\n".join(pair_lines) + "\n", encoding="utf-8")
        log.info("wrote %d annotation pairs to %s", len(pair_lines), args.pairs_out)
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    gt_tables = gt_tables_from_manifest(args.manifest)
    outputs = ingest_outputs(args.outputs)
    client = gateway_client(args)
    records = run_benchmark(
        gt_tables,
        outputs,
        client,
        judge=args.judge == "on",
        workers=args.workers,
        tolerance=args.tolerance,
    )
    write_records(records, args.out)
    log.info("wrote %d score records to %s", len(records), args.out)
    return 0


def cmd_leaderboard(args: argparse.Namespace) -> int:
    records = read_records(args.records)
    rows = build_leaderboard(records)
    md = leaderboard_markdown(rows)
    if args.md:
        Path(args.md).write_text(md, encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(leaderboard_csv(rows), encoding="utf-8")
    print(md, end="")
    return 0


def cmd_correlate(args: argparse.Namespace) -> int:
    records = read_records(args.records)
    ratings = load_ratings_jsonl(args.ratings)
    results = {}
    for metric, scale in METRIC_SCALES.items():
        metric_by_pair = {r.pair_id: getattr(r, metric) for r in records}
        metric_by_pair = {k: (float(v) if v is not None else None) for k, v in metric_by_pair.items()}
        try:
            report = metric_vs_human(metric_by_pair, ratings, scale=scale)
        except (DegenerateInput, JoinEmpty) as exc:
            log.warning("metric %s not comparable: %s", metric, exc)
            continue
        results[metric] = dataclasses.asdict(report)
    text = json.dumps(results, indent=2)
    if args.out_json:
        Path(args.out_json).write_text(text, encoding="utf-8")
    if args.out_csv:
        lines = ["metric,pearson,spearman,kendall,n"]
        for metric, rep in results.items():
            lines.append(f"{metric},{rep['pearson']:.6f},{rep['spearman']:.6f},{rep['kendall']:.6f},{rep['n']}")
        Path(args.out_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(text)
    return 0


def cmd_agreement(args: argparse.Namespace) -> int:
    ratings = load_ratings_jsonl(args.ratings)
    try:
        report = agreement(ratings)
    except DegenerateInput as exc:
        log.error("agreement undefined: %s", exc)
        return 1
    text = json.dumps(dataclasses.asdict(report), indent=2)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text)
    return 0


def cmd_serve_annotate(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import PairStore, RatingsLog, create_app

    store = PairStore.from_jsonl(args.pairs)
    ratings = RatingsLog(args.ratings)
    app = create_app(store, ratings, static_dir=args.static)
    host, _, port = args.bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabeval", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("harvest", help="extract, clean and validate tables from LaTeX sources")
    p.add_argument("--source", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--llm-classify", action="store_true", help="classify complexity with the LLM")
    add_gateway_args(p)
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("gen-pages", help="assemble synthetic pages with ground truth")
    p.add_argument("--assets", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pages", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON config with layout ranges and table density")
    p.set_defaults(func=cmd_gen_pages)

    p = sub.add_parser("ingest", help="index parser outputs")
    p.add_argument("--outputs", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("match", help="align ground-truth tables with parser outputs")
    p.add_argument("--manifest", required=True)
    p.add_argument("--outputs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pairs-out", help="also write an annotation pair store")
    p.add_argument("--hints", action="store_true", help="generate discrepancy hints for pairs")
    add_gateway_args(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("score", help="run the full benchmark scoring")
    p.add_argument("--manifest", required=True)
    p.add_argument("--outputs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--judge", choices=("on", "off"), default="on")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--tolerance", type=int, default=1)
    add_gateway_args(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("leaderboard", help="aggregate records into the ranked table")
    p.add_argument("--records", required=True)
    p.add_argument("--csv")
    p.add_argument("--md")
    p.set_defaults(func=cmd_leaderboard)

    p = sub.add_parser("correlate", help="correlate metrics against human ratings")
    p.add_argument("--records", required=True)
    p.add_argument("--ratings", required=True)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("agreement", help="inter-annotator agreement statistics")
    p.add_argument("--ratings", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("serve-annotate", help="serve the annotation backend")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--pairs", required=True)
    p.add_argument("--ratings", required=True)
    p.add_argument("--static", help="directory with the built annotation UI")
    p.set_defaults(func=cmd_serve_annotate)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
