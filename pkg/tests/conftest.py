"""Shared fixtures."""

import pytest

from src.dataset import Dataset
from src.synth import PlantedEffect, SynthSpec, build_dataset
from tests.factories import build_small_dataset


@pytest.fixture
def small_dataset() -> Dataset:
    return build_small_dataset()


@pytest.fixture(scope="session")
def tiny_spec() -> SynthSpec:
    """Short trials with a strong alpha effect on valence."""
    return SynthSpec(
        participants=12,
        clips=6,
        common_clips=4,
        duration_s=16.0,
        effects=[PlantedEffect(target="valence", band="alpha", amplitude=4.0)],
        seed=3,
    )


@pytest.fixture(scope="session")
def tiny_synth(tiny_spec):
    """In-memory dataset and manifest generated from ``tiny_spec``."""
    return build_dataset(tiny_spec)
