"""Named sub-seeds derived from a single root seed."""

import hashlib

from typing import Union

import numpy as np


def derive_seed(seed: int, *names: Union[str, int]) -> int:
    """Derive a 32-bit sub-seed from a root seed and a path of names.

    The result depends only on the arguments, never on call order, so tasks
    seeded this way are reproducible under any schedule.

    Args:
        seed: Root seed
        *names: Task path, e.g. ``("fold", 3, "grid", 7)``

    Returns:
        Sub-seed in ``[0, 2**32)``
    """
    key = "/".join([str(int(seed))] + [str(n) for n in names])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


def rng_for(seed: int, *names: Union[str, int]) -> np.random.Generator:
    """Return a numpy generator seeded with ``derive_seed(seed, *names)``."""
    return np.random.default_rng(derive_seed(seed, *names))
