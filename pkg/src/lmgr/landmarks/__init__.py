"""Fact landmark extraction and verification."""

from .base import Category, Landmark, LandmarkSet, classify
from .extract import (
    EXTRACTORS,
    extract_exhaustive,
    extract_hm,
    extract_landmarks,
    extract_rhw,
    verify_fact_landmark,
)
from .oracle import LandmarkOracle, acyclic_plans, oracle_landmarks

__all__ = [
    'Category',
    'Landmark',
    'LandmarkSet',
    'classify',
    'EXTRACTORS',
    'extract_exhaustive',
    'extract_hm',
    'extract_landmarks',
    'extract_rhw',
    'verify_fact_landmark',
    'LandmarkOracle',
    'acyclic_plans',
    'oracle_landmarks',
]
