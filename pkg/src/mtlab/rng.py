"""Named random streams: one root seed, independent per-component generators.

Every randomized component (data shuffle, parameter init, event jitter, ...)
pulls its generator via ``stream(seed, name)``.  Holding the root seed fixed
while renaming nothing keeps all streams fixed; components can be re-seeded
individually by changing only their name.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(seed: int, name: str) -> np.random.Generator:
    """Deterministic, platform-independent generator for (seed, name)."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & 0xFFFFFFFF] + words)))
