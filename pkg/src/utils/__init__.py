"""Shared helpers: constants, seeding and task execution."""

from .executor import default_jobs, run_tasks
from .seeding import derive_seed, rng_for


__all__ = [
    "default_jobs",
    "derive_seed",
    "rng_for",
    "run_tasks",
]
