import numpy as np


def ensure_rng(random_state=None):
    """
    Creates a random number generator based on an optional seed.  This can be
    an integer or another generator for a seeded rng, or None for an
    unseeded rng.

    Generators are backed by the counter-based Philox bit generator so that
    independent streams can be split off a single seed (see `split_rng`).
    """
    if random_state is None:
        random_state = np.random.Generator(np.random.Philox())
    elif isinstance(random_state, (int, np.integer)):
        random_state = np.random.Generator(np.random.Philox(int(random_state)))
    else:
        assert isinstance(random_state, np.random.Generator)
    return random_state


def split_rng(seed, index):
    """
    Independent generator number `index` derived from `seed`.

    The splitting rule is `SeedSequence(seed, spawn_key=(index,))` feeding a
    Philox bit generator; chain `k` of a run seeded with `s` always draws from
    `split_rng(s, k)`, whatever order chains are scheduled in.
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(random_state):
    """Draw a 64-bit seed from a generator, for sub-streams shared by name."""
    return int(random_state.integers(0, 2 ** 63 - 1))


class Colours:
    """Print in nice colours."""

    BOLD = '\033[1m'
    END = '\033[0m'
    GREEN = '\033[92m'
    PURPLE = '\033[95m'
    RED = '\033[91m'
    YELLOW = '\033[93m'

    @classmethod
    def _wrap_colour(cls, s, colour):
        return colour + s + cls.END

    @classmethod
    def black(cls, s):
        """Wrap text in black."""
        return cls._wrap_colour(s, cls.END)

    @classmethod
    def bold(cls, s):
        """Wrap text in bold."""
        return cls._wrap_colour(s, cls.BOLD)

    @classmethod
    def green(cls, s):
        """Wrap text in green."""
        return cls._wrap_colour(s, cls.GREEN)

    @classmethod
    def purple(cls, s):
        """Wrap text in purple."""
        return cls._wrap_colour(s, cls.PURPLE)

    @classmethod
    def red(cls, s):
        """Wrap text in red."""
        return cls._wrap_colour(s, cls.RED)

    @classmethod
    def yellow(cls, s):
        """Wrap text in yellow."""
        return cls._wrap_colour(s, cls.YELLOW)
