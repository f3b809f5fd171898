"""Shared checks that drive the ranking engine against the exact oracle."""

from __future__ import annotations

import math

import pytest

from tcpel.mln import world_log_score
from tcpel.oracle import exact_probabilities, log_partition
from tcpel.rank import AnytimeRanker


def check_every_prefix(kb, tight=False):
    """Step a ranker one world at a time and check the bound at every prefix."""
    ex = exact_probabilities(kb)
    z = math.exp(ex.log_z)
    ranker = AnytimeRanker(kb, tight_bound=tight)
    g = ranker.g
    total = math.exp(log_partition(g))
    seen_mass: list[float] = []
    last_bound = math.inf
    while True:
        u = math.exp(ranker.log_bound)
        unassigned = max(total - math.fsum(seen_mass), 0.0)
        assert unassigned <= u * (1 + 1e-9) + 1e-12 * total
        assert u <= last_bound * (1 + 1e-12)
        last_bound = u
        res = ranker.result()
        for p in res.provable_pairs:
            if p.strict:
                # the certificate promises a gap of at least s_a - s_b - U in score units
                gap = (ex.probabilities.get(p.greater, 0.0) - ex.probabilities.get(p.lesser, 0.0)) * z
                promised = res.score(p.greater) - res.score(p.lesser) - u
                assert promised > 0
                assert gap >= promised * (1 - 1e-9) - 1e-12 * z
            else:
                assert ex.probabilities.get(p.greater, 0.0) >= ex.probabilities.get(p.lesser, 0.0) * (1 - 1e-9)
        if not ranker.step():
            break
        if ranker.last_world is not None:
            seen_mass.append(math.exp(world_log_score(ranker.last_world, g)))
    assert ranker.exhausted
    r = ranker.result()
    for a, p in ex.probabilities.items():
        assert r.score(a) / z == pytest.approx(p, rel=1e-9), (a, r.score(a) / z, p)
