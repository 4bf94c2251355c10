"""Deterministic random sub-streams.

Every random draw in a run comes from a generator keyed by
``(master_seed, stream, timestep, sub_key)``.  The key is turned into a
:class:`numpy.random.SeedSequence` with ``entropy=master_seed`` and
``spawn_key=(stream, timestep, sub_key)``, so two streams with different
keys are statistically independent and no stream depends on how many
draws another stream has consumed.  Draws that concern the whole
population are made as one vector indexed by citizen id, which keeps the
outcome independent of how citizens are later partitioned across workers.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    POPULATION = 1
    NETWORK = 2
    MEDIA = 3
    MEDIA_EXPOSURE = 4
    BEHAVIOUR = 5
    ENGO = 6
    ENGO_SIGNAL = 7
    ENGO_EXPOSURE = 8
    POLITICS = 9
    SETUP = 10


SPLITTING_RULE = (
    "SeedSequence(entropy=master_seed, spawn_key=(stream, timestep, sub_key))"
)


def substream(master_seed, stream, timestep=0, sub_key=0):
    """Return the generator for one named stream position."""
    if master_seed is None:
        raise ValueError("refusing to create an unseeded random stream")
    seq = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(int(stream), int(timestep), int(sub_key)),
    )
    return np.random.Generator(np.random.PCG64(seq))


def derived_seed(base_seed, *indices):
    """Fold ``indices`` into ``base_seed`` to get a new 63-bit master seed."""
    seq = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=tuple(int(i) for i in indices)
    )
    hi, lo = seq.generate_state(2, dtype=np.uint32)
    return int((int(hi) << 31) ^ int(lo))
