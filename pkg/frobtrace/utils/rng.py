"""
Seeded random substreams.

Every curve of a sweep draws from its own PCG64 stream keyed by
(seed, q, curve_index), so the sample does not depend on evaluation order
or on how many curves were requested for other fields.
"""
import numpy as np


def substream(seed: int, q: int, curve_index: int) -> np.random.Generator:
    """Independent generator for one (seed, q, curve_index) triple."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, int(q), int(curve_index)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Generator keyed by a seed and any number of extra integers (identity-suite sampling)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
