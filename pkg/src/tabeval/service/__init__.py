"""HTTP service wrapping the evaluation engine and annotation workflow."""

from .app import create_app
from .store import AnnotationPair, PairStore, RatingsLog, next_pair_for

__all__ = ["create_app", "PairStore", "RatingsLog", "AnnotationPair", "next_pair_for"]
