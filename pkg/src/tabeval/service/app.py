"""FastAPI application: annotation backend plus on-demand parse/score endpoints.

The annotation endpoints implement the rating workflow (next-pair
assignment, pair payloads, rating submission, progress); the parse and
score endpoints expose the core engine to any HTTP client. The frontend
bundle, when built, is served from the same app.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import MalformedTable
from ..harness import score_pair
from ..parsing import parse_auto_with_format
from . import schemas
from .store import PairStore, RatingsLog, next_pair_for


def create_app(
    store: PairStore,
    ratings: RatingsLog,
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    app = FastAPI(title="tabeval", docs_url="/docs")

    @app.exception_handler(RequestValidationError)
    async def validation_as_400(request: Request, exc: RequestValidationError):
        # out-of-range scores and malformed bodies are client errors, plain 400
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "pairs": len(store)}

    # -- annotation workflow -------------------------------------------------

    @app.get("/api/pairs/next", response_model=schemas.NextPairOut)
    def pairs_next(annotator: str) -> schemas.NextPairOut:
        if not annotator:
            raise HTTPException(status_code=400, detail="annotator is required")
        rated = ratings.ratings_by_annotator(annotator)
        remaining = sum(1 for pid in store.pair_ids if pid not in rated)
        return schemas.NextPairOut(pair_id=next_pair_for(store, ratings, annotator), remaining=remaining)

    @app.get("/api/pairs/{pair_id:path}", response_model=schemas.PairView)
    def pair_view(pair_id: str, annotator: Optional[str] = None) -> schemas.PairView:
        pair = store.get(pair_id)
        if pair is None:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
        existing = ratings.rating_of(pair_id, annotator) if annotator else None
        return schemas.PairView(
            pair_id=pair.pair_id,
            gt_latex=pair.gt_latex,
            gt_grid=pair.gt_grid,
            extracted_text=pair.extracted_text,
            extracted_format=pair.extracted_format,
            extracted_grid=pair.extracted_grid,
            hints=[schemas.HintOut(**h) for h in pair.hints],
            existing_rating=existing,
        )

    @app.post("/api/ratings", response_model=schemas.RatingAck)
    def submit_rating(rating: schemas.RatingIn) -> schemas.RatingAck:
        if rating.pair_id not in store:
            raise HTTPException(status_code=404, detail=f"unknown pair {rating.pair_id!r}")
        overwrote = ratings.add(rating.pair_id, rating.annotator_id, rating.score)
        return schemas.RatingAck(status="ok", overwrote=overwrote)

    @app.get("/api/progress", response_model=schemas.ProgressOut)
    def progress() -> schemas.ProgressOut:
        return schemas.ProgressOut(
            pairs=len(store),
            total_ratings=ratings.total_effective(),
            by_annotator=ratings.counts_by_annotator(),
        )

    # -- engine endpoints ----------------------------------------------------

    @app.post("/api/parse", response_model=schemas.ParseOut)
    def parse(body: schemas.ParseIn) -> schemas.ParseOut:
        try:
            grid, fmt = parse_auto_with_format(body.text, body.format)
        except (MalformedTable, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return schemas.ParseOut(grid=grid.to_json_dict(), format=fmt)

    @app.post("/api/score", response_model=schemas.ScorePairOut)
    def score(body: schemas.ScorePairIn) -> schemas.ScorePairOut:
        try:
            gt_grid, _ = parse_auto_with_format(body.gt_text, body.gt_format)
            pred_grid, _ = parse_auto_with_format(body.pred_text, body.pred_format)
        except (MalformedTable, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        scores = score_pair(gt_grid, pred_grid, body.tolerance)
        return schemas.ScorePairOut(**scores.__dict__)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
