"""Seeded random substreams.

Every random draw in a run comes from a generator derived from the master
seed plus a fixed key path (drop, stream, entity).  Keys never depend on
scheduling, so parallel drops reproduce serial ones bit for bit.
"""

from __future__ import annotations

import numpy as np

# stream identifiers; append only, never renumber
MACRO_UES = 1
HOTSPOTS = 2
LOS_STATE = 3
SHADOW = 4
SMALL_SCALE = 5
INDOOR_DISTANCE = 6


def substream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)
