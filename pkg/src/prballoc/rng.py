"""Deterministic random substreams derived from a single master seed.

Every stochastic quantity in the simulator (user positions, shadowing,
fast fading, greedy orderings, Monte-Carlo drops) draws from its own
substream identified by a tuple of small integer tags.  Substreams are
mutually independent, so adding users or drops never perturbs the draws
of the ones that already exist.
"""

from __future__ import annotations

import numpy as np


def substream(master_seed: int, *tags: int) -> np.random.Generator:
    """Return an independent generator for ``(master_seed, *tags)``."""
    entropy = (int(master_seed),) + tuple(int(t) for t in tags)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(master_seed: int, *tags: int) -> int:
    """Collapse ``(master_seed, *tags)`` into one reproducible integer seed."""
    entropy = (int(master_seed),) + tuple(int(t) for t in tags)
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])
