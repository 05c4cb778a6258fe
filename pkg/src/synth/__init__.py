"""Seeded synthetic datasets with planted ground truth."""

from .generator import build_dataset, build_ratings, clip_layout, generate, scr_shape
from .spec import ClipTruth, GroundTruth, PlantedEffect, SynthSpec, TrialTruth, VABlob


__all__ = [
    "ClipTruth",
    "GroundTruth",
    "PlantedEffect",
    "SynthSpec",
    "TrialTruth",
    "VABlob",
    "build_dataset",
    "build_ratings",
    "clip_layout",
    "generate",
    "scr_shape",
]
