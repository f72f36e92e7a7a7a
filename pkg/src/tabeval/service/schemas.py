"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class HintOut(BaseModel):
    category: str
    text: str


class PairView(BaseModel):
    pair_id: str
    gt_latex: str
    gt_grid: Optional[dict[str, Any]]
    extracted_text: Optional[str]
    extracted_format: Optional[str]
    extracted_grid: Optional[dict[str, Any]]
    hints: list[HintOut]
    existing_rating: Optional[int] = None


class NextPairOut(BaseModel):
    pair_id: Optional[str]
    remaining: int


class RatingIn(BaseModel):
    pair_id: str
    annotator_id: str = Field(min_length=1)
    score: int = Field(ge=0, le=10)


class RatingAck(BaseModel):
    status: str
    overwrote: bool


class ProgressOut(BaseModel):
    pairs: int
    total_ratings: int
    by_annotator: dict[str, int]


class ParseIn(BaseModel):
    text: str
    format: Optional[str] = None


class ParseOut(BaseModel):
    grid: dict[str, Any]
    format: str


class ScorePairIn(BaseModel):
    gt_text: str
    pred_text: str
    gt_format: Optional[str] = None
    pred_format: Optional[str] = None
    tolerance: int = Field(default=1, ge=0)


class ScorePairOut(BaseModel):
    teds: float
    grits_top: float
    grits_con: float
    grits_avg: float
    score_index: float
    score_content: float
    score_avg: float
