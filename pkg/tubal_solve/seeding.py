"""
Seed derivation and named random streams.

Every draw in the package comes from a PCG64 generator. A master seed is
split into independent streams by name, so the operator, the noise and the
initialization of one run never share state.
"""

import hashlib
import zlib
from typing import Any

import numpy as np

STREAMS = ("truth", "operator", "noise", "init", "split", "mask", "probe")


def _name_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def stream(seed: int, name: str) -> np.random.Generator:
    """Generator for the named stream of ``seed``."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(_name_key(name),))
    return np.random.Generator(np.random.PCG64(sequence))


def derive_seed(master: int, point_key: Any, repeat: int) -> int:
    """64-bit seed for one grid point and repeat of an experiment."""
    digest = hashlib.blake2b(repr(point_key).encode("utf-8"), digest_size=8).digest()
    sequence = np.random.SeedSequence([int(master), int.from_bytes(digest, "little"), int(repeat)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
