"""Tests for ingest, benchmark running and leaderboard aggregation."""

import json

import httpx
import pytest

from tabeval.gateway import LlmClient, LlmEndpointConfig
from tabeval.harness import (
    GtTable,
    ParserOutput,
    ScoreRecord,
    build_leaderboard,
    ingest_outputs,
    leaderboard_csv,
    leaderboard_markdown,
    read_records,
    run_benchmark,
    score_pair,
    write_records,
)
from tabeval.parsing import parse_latex

GT_LATEX = "\\begin{tabular}{cc} a & b \\\\ c & d \\end{tabular}"
GT_HTML = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>"
GT_MD = "| a | b |\n|---|---|\n| c | d |"


def scripted_client(judge_scores=None, tmp_path=None):
    """A gateway client whose 'model' matches verbatim and judges by marker."""
    judge_scores = judge_scores or {}

    def responder(request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        text = body["messages"][-1]["content"]
        if "Rate how well" in text:
            score = 10
            for marker, value in judge_scores.items():
                if marker in text:
                    score = value
                    break
            content = f"Assessment.\n{score}"
        else:
            # matching prompt: answer every listed table with the chunk of
            # parser output between BEGIN/END markers, or NOT_FOUND
            ids = []
            for line in text.splitlines():
                if line.startswith("--- ground truth table "):
                    ids.append(line.removeprefix("--- ground truth table ").removesuffix(" ---"))
            output = text.split("--- parser output ---\n", 1)[1].rsplit("\n\nAnswer with", 1)[0]
            blocks = []
            for tid in ids:
                begin = f"BEGIN-{tid}\n"
                end = f"\nEND-{tid}"
                if begin in output and end in output:
                    chunk = output.split(begin, 1)[1].split(end, 1)[0]
                    blocks.append(f"=== TABLE {tid} ===\n{chunk}\n=== END TABLE ===")
                else:
                    blocks.append(f"=== TABLE {tid} ===\nNOT_FOUND\n=== END TABLE ===")
            content = "\n".join(blocks)
        return httpx.Response(200, json={"choices": [{"message": {"content": content}}]})

    cfg = LlmEndpointConfig(
        base_url="http://mock/v1",
        model="scripted",
        cache_dir=str(tmp_path) if tmp_path else None,
    )
    return LlmClient(cfg, transport=httpx.MockTransport(responder), backoff=0.0)


def wrap_output(table_id: str, content: str) -> str:
    return f"page prose before\nBEGIN-{table_id}\n{content}\nEND-{table_id}\npage prose after"


class TestIngestOutputs:
    def test_empty_root(self, tmp_path):
        assert ingest_outputs(tmp_path / "missing") == {}

    def test_two_parsers_two_pages(self, tmp_path):
        for parser in ("alpha", "beta"):
            d = tmp_path / parser
            d.mkdir()
            (d / "page000.md").write_text("| a |\n|---|\n| 1 |")
            (d / "page001.html").write_text("<table><tr><td>x</td></tr></table>")
        outputs = ingest_outputs(tmp_path)
        assert len(outputs) == 4
        assert outputs[("alpha", "page000")].format_hint == "markdown"
        assert outputs[("beta", "page001")].format_hint == "html"

    def test_txt_extension_sniffs(self, tmp_path):
        d = tmp_path / "gamma"
        d.mkdir()
        (d / "page000.txt").write_text("a  b")
        assert ingest_outputs(tmp_path)[("gamma", "page000")].format_hint is None


class TestScorePair:
    def test_identity_scores_one(self):
        gt = parse_latex(GT_LATEX)
        scores = score_pair(gt, gt)
        assert scores.teds == 1.0
        assert scores.grits_top == scores.grits_con == scores.grits_avg == 1.0
        assert scores.score_index == scores.score_content == scores.score_avg == 1.0


class TestRunBenchmark:
    def gt(self):
        return [GtTable(page_id="page000", table_id="t0", latex=GT_LATEX, complexity="simple")]

    def test_identity_pipeline(self, tmp_path):
        outputs = {("perfect", "page000"): ParserOutput(wrap_output("t0", GT_HTML))}
        records = run_benchmark(self.gt(), outputs, scripted_client(tmp_path=tmp_path), judge=False)
        assert len(records) == 1
        r = records[0]
        assert not r.miss
        assert r.teds == pytest.approx(1.0)
        assert r.grits_top == r.grits_con == 1.0
        assert r.score_avg == 1.0
        assert r.judge is None  # judge off
        assert r.pred_format == "html"

    def test_miss_scores_zero(self, tmp_path):
        outputs = {("blind", "page000"): ParserOutput("no tables in this output at all")}
        records = run_benchmark(self.gt(), outputs, scripted_client(tmp_path=tmp_path), judge=True)
        r = records[0]
        assert r.miss
        assert r.judge == 0
        assert r.teds == 0.0 and r.grits_avg == 0.0 and r.score_avg == 0.0

    def test_absent_output_is_miss(self, tmp_path):
        records = run_benchmark(self.gt(), {("ghost", "other_page"): ParserOutput("x")},
                                scripted_client(tmp_path=tmp_path), judge=False)
        assert records[0].miss

    def test_judge_scores_recorded(self, tmp_path):
        outputs = {("ok", "page000"): ParserOutput(wrap_output("t0", GT_MD))}
        client = scripted_client(judge_scores={"| a | b |": 8}, tmp_path=tmp_path)
        records = run_benchmark(self.gt(), outputs, client, judge=True)
        assert records[0].judge == 8
        assert records[0].pred_format == "markdown"

    def test_cached_run_is_deterministic(self, tmp_path):
        outputs = {("ok", "page000"): ParserOutput(wrap_output("t0", GT_MD))}
        first = run_benchmark(self.gt(), outputs, scripted_client(tmp_path=tmp_path), judge=True)
        # second client would answer differently, but the cache pins the transcripts
        second_client = scripted_client(judge_scores={"| a | b |": 2}, tmp_path=tmp_path)
        second = run_benchmark(self.gt(), outputs, second_client, judge=True)
        assert [r.to_json_dict() for r in first] == [r.to_json_dict() for r in second]

    def test_requires_client(self):
        with pytest.raises(ValueError):
            run_benchmark(self.gt(), {}, None)

    def test_offline_mode_degrades_on_endpoint_failure(self, tmp_path):
        from tabeval.errors import EndpointError
        from tabeval.gateway import LlmClient, LlmEndpointConfig

        cfg = LlmEndpointConfig(
            base_url="http://down/v1", model="down", cache_dir=str(tmp_path), max_retries=0
        )
        dead_client = LlmClient(cfg, transport=httpx.MockTransport(lambda r: httpx.Response(500)), backoff=0.0)
        outputs = {("p", "page000"): ParserOutput(wrap_output("t0", GT_MD))}
        # judge off: the run completes, the page degrades to unverified misses
        records = run_benchmark(self.gt(), outputs, dead_client, judge=False)
        assert records[0].miss and records[0].validation == "unverified"
        # judge on: the endpoint loss is fatal
        with pytest.raises(EndpointError):
            run_benchmark(self.gt(), outputs, dead_client, judge=True)


class TestRecordsIo:
    def test_round_trip(self, tmp_path):
        record = ScoreRecord(
            parser_id="p",
            page_id="page000",
            gt_table_id="t0",
            complexity="simple",
            validation="verbatim",
            miss=False,
            teds=0.5,
            judge=7,
        )
        path = tmp_path / "records.jsonl"
        write_records([record], path)
        assert read_records(path) == [record]


def make_record(parser, complexity, judge, teds=0.5, miss=False, pred_format="markdown", i=[0]):
    i[0] += 1
    return ScoreRecord(
        parser_id=parser,
        page_id=f"page{i[0]:03d}",
        gt_table_id=f"t{i[0]}",
        complexity=complexity,
        validation="verbatim" if not miss else "unverified",
        miss=miss,
        teds=teds,
        judge=judge,
        pred_format=None if miss else pred_format,
    )


class TestLeaderboard:
    def test_sorted_by_overall(self):
        records = [
            make_record("good", "simple", 10),
            make_record("good", "simple", 9),
            make_record("bad", "simple", 2),
        ]
        rows = build_leaderboard(records)
        assert [r.parser_id for r in rows] == ["good", "bad"]
        assert rows[0].overall == pytest.approx(9.5)

    def test_weighted_mean_identity(self):
        records = []
        values = {"simple": (10, 8), "moderate": (7,), "complex": (4, 5, 6)}
        for complexity, judges in values.items():
            for j in judges:
                records.append(make_record("p", complexity, j))
        row = build_leaderboard(records)[0]
        weighted = sum(
            row.by_complexity[c] * row.counts[c] for c in row.by_complexity
        ) / sum(row.counts.values())
        assert row.overall == pytest.approx(weighted)

    def test_misses_count_as_zero(self):
        records = [
            make_record("p", "simple", 10),
            make_record("p", "simple", 0, teds=0.0, miss=True),
        ]
        row = build_leaderboard(records)[0]
        assert row.overall == pytest.approx(5.0)
        assert row.mean_teds == pytest.approx(0.25)

    def test_teds_not_applicable_for_text_only_parser(self):
        records = [
            make_record("texty", "simple", 6, teds=0.4, pred_format="text"),
            make_record("texty", "simple", 0, teds=0.0, miss=True),
        ]
        row = build_leaderboard(records)[0]
        assert row.mean_teds is None

    def test_markdown_and_csv_render(self):
        records = [make_record("p", "simple", 10), make_record("q", "moderate", 3)]
        rows = build_leaderboard(records)
        md = leaderboard_markdown(rows)
        assert "| Parser |" in md and "| p |" in md
        csv = leaderboard_csv(rows)
        assert csv.splitlines()[0].startswith("parser_id,overall")

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            build_leaderboard([])
