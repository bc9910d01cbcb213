"""Per-purpose random sub-streams derived from one master seed.

Each purpose gets its own Philox (counter-based, 64-bit) generator, so
changing how many draws one component makes never shifts the others.
"""
import numpy as np

PURPOSES = ("stream", "noise", "masks", "bexp", "truth", "adversary")


def substream(seed: int, purpose: str) -> np.random.Generator:
    key = PURPOSES.index(purpose)
    ss = np.random.SeedSequence(int(seed), spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))
