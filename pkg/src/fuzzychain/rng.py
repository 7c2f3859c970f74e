"""Independent, reproducible random substreams.

Every randomness consumer (stake sampling, key generation, selection,
votes, block contents, each baseline) gets its own generator derived
from the master seed plus a structured path, so turning one feature on
or off never shifts the draws any other consumer sees. Paths are keyed
by the rounds *value* (not its position in a sweep), so adding a round
count to a sweep does not perturb the existing runs.
"""

from __future__ import annotations

import numpy as np

# stable integer ids for path components; never renumber, only append
NAMES = {
    "exp1": 101,
    "exp2": 102,
    "custom": 103,
    "stakes": 1,
    "keys": 2,
    "selection": 3,
    "votes": 4,
    "blocks": 5,
    "pow": 6,
    "pos": 7,
    "dpos": 8,
    "participants": 9,
}


def _path_ids(path) -> tuple[int, ...]:
    out = []
    for part in path:
        if isinstance(part, str):
            try:
                out.append(NAMES[part])
            except KeyError:
                raise KeyError(f"unknown rng path name {part!r}; known: {sorted(NAMES)}") from None
        else:
            value = int(part)
            if value < 0:
                raise ValueError(f"rng path components must be non-negative, got {part}")
            out.append(value)
    return tuple(out)


def substream(seed: int, *path) -> np.random.Generator:
    """Generator for (seed, path); identical arguments, identical stream.

    Path components may be known names ("exp1", "selection", ...) or
    non-negative integers (rounds value, repetition index).
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=_path_ids(path))
    return np.random.default_rng(ss)
