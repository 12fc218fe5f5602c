"""Deterministic, splittable random-number streams.

A stream is identified by a root seed and a path of 32-bit indices, for
instance `(config, rep, purpose)`. The pair is hashed by
`numpy.random.SeedSequence` into the key of a counter-based Philox
generator, so the numbers drawn from a stream depend only on its
identity and never on the order in which streams are used. This makes
parallel replication reproducible regardless of the worker schedule.

Normal variates are produced by numpy's ziggurat sampler.

Streams are values: every draw function starts from the beginning of
the stream. Use `derive` to obtain a separate stream for every
purpose instead of drawing twice from the same one.
"""

import dataclasses

import numpy as np

from .errors import DomainError


# Purpose indices used as the last element of a stream path.
DATA = 0
BOOTSTRAP = 1
INDICES = 2
NOISE = 3

_MAX_INDEX = 2**32
_MAX_SEED = 2**64


@dataclasses.dataclass(frozen=True)
class RngStream:
    """Identity of a random-number stream.

    Parameters
    ----------
    root_seed : int
        Unsigned 64-bit root seed

    path : tuple of int
        Sequence of unsigned 32-bit indices identifying the stream
    """

    root_seed: int = 0
    path: tuple = ()

    def __post_init__(self):
        if not 0 <= self.root_seed < _MAX_SEED:
            raise DomainError(f'Root seed {self.root_seed} is not a u64')

        for index in self.path:
            if not 0 <= index < _MAX_INDEX:
                raise DomainError(f'Path index {index} is not a u32')

    def derive(self, index):
        """Return the child stream at `index`; see `derive`."""
        return derive(self, index)

    def generator(self):
        """Return a fresh `numpy.random.Generator` for this stream."""
        seed_sequence = np.random.SeedSequence(
            entropy=self.root_seed,
            spawn_key=self.path
        )

        return np.random.Generator(np.random.Philox(seed_sequence))


def derive(parent, index):
    """Derive a child stream.

    Parameters
    ----------
    parent : RngStream
        Parent stream

    index : int
        Unsigned 32-bit index of the child

    Returns
    -------
    Child stream whose sequence is a pure function of the root seed of
    the parent and the extended path.
    """
    index = int(index)
    return RngStream(parent.root_seed, parent.path + (index,))


def standard_normal(stream, n):
    """Draw `n` independent standard normal variates."""
    return stream.generator().standard_normal(int(n))


def uniform01(stream, n):
    """Draw `n` independent uniform variates on `[0, 1)`."""
    return stream.generator().random(int(n))


def categorical_uniform(stream, n, k):
    """Draw `n` independent indices, uniformly distributed on `0..k-1`.

    Parameters
    ----------
    stream : RngStream
        Stream to draw from

    n : int
        Number of draws

    k : int
        Number of categories. Must be positive.

    Returns
    -------
    Integer array of length `n`.
    """
    if k < 1:
        raise DomainError('Categorical draws require at least one category')

    return stream.generator().integers(0, int(k), size=int(n))
