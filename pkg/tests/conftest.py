"""Shared test helpers: a scripted random source and small case-set builders."""

import numpy as np
import pytest

from multigp.core import FitnessCaseSet


class StubRandom:
    """Random source replaying a scripted draw sequence.

    Each entry is ("randint", value) or ("random", value); requesting the
    wrong kind or exhausting the script fails the test immediately.  Derived
    draws (coin, uniform, sample_distinct) consume base draws exactly like
    the real source.
    """

    def __init__(self, draws):
        self.draws = list(draws)
        self.seed = -1

    def _next(self, kind):
        assert self.draws, f"draw script exhausted on a {kind} request"
        expected_kind, value = self.draws.pop(0)
        assert expected_kind == kind, (
            f"script expected a {expected_kind} draw, code requested {kind}"
        )
        return value

    def randint(self, n):
        value = self._next("randint")
        assert 0 <= value < n, f"scripted randint value {value} outside [0, {n})"
        return value

    def random(self):
        return self._next("random")

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.random()

    def coin(self):
        return self.random() < 0.5

    def sample_distinct(self, n, k):
        out = []
        while len(out) < k:
            v = self.randint(n)
            if v not in out:
                out.append(v)
        return out

    def assert_exhausted(self):
        assert not self.draws, f"{len(self.draws)} scripted draws left unused"


def make_cases(xs, targets):
    return FitnessCaseSet(inputs=np.asarray(xs, dtype=float),
                          targets=np.asarray(targets, dtype=float))


@pytest.fixture
def five_cases():
    xs = np.array([0.5, 1.0, 2.0, 3.5, 7.0])
    return make_cases(xs, xs ** 2 + xs)
