"""
Counter-based random streams split from a master seed
"""
from typing import Tuple

import numpy as np


class RandomStreams:
    """
    Hands out independent Philox generators keyed by tuples of integers

    The same (seed, key) always yields the same stream, whatever process or
    order it is requested in.
    """

    # Key of a standalone fit's chain stream
    CHAIN_KEY: Tuple[int, ...] = ()

    @staticmethod
    def generator(seed: int, key: Tuple[int, ...] = ()) -> np.random.Generator:
        sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
        return np.random.Generator(np.random.Philox(sequence))

    @staticmethod
    def chain(seed: int) -> np.random.Generator:
        return RandomStreams.generator(seed, RandomStreams.CHAIN_KEY)

    @staticmethod
    def dataset(seed: int, example_id: int, rep: int) -> np.random.Generator:
        """Stream that generates the noise of one replication; shared by every method"""
        return RandomStreams.generator(seed, (example_id, rep, 0))

    @staticmethod
    def fit_seed(seed: int, example_id: int, rep: int, method_index: int) -> int:
        """Derive the chain seed of one (replication, method) fit"""
        sequence = np.random.SeedSequence(seed, spawn_key=(example_id, rep, 1 + method_index))
        return int(sequence.generate_state(1, dtype=np.uint32)[0])
