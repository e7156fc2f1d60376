"""Cross-checks: compiled kernels vs the pure twin vs brute force."""

import random
from itertools import combinations

import pytest

from mullsem._kernels import pure

try:
    from mullsem._kernels import _core as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled kernels not built")


def brute_minimize(masks):
    uniq = set(masks)
    return tuple(sorted(m for m in uniq
                        if not any(o != m and o & m == o for o in uniq)))


def brute_transversals(masks, nbits):
    hits = []
    for cand in range(1 << nbits):
        if all(cand & e for e in masks):
            hits.append(cand)
    return brute_minimize(hits) if masks else (0,)


def brute_phase_orth(table, n, pole_mask, x_mask):
    out = 0
    for y in range(n):
        if all((pole_mask >> table[i * n + y]) & 1
               for i in range(n) if x_mask >> i & 1):
            out |= 1 << y
    return out


def random_family(rng, nbits, count):
    return [rng.randrange(1 << nbits) for _ in range(count)]


class TestPureAgainstBruteForce:
    def test_minimize(self):
        rng = random.Random(101)
        for _ in range(200):
            fam = random_family(rng, 6, rng.randint(0, 10))
            assert pure.minimize_family(fam) == brute_minimize(fam)

    def test_transversals_exhaustive_small(self):
        for nbits in range(4):
            universe = list(range(1 << nbits))
            for count in range(3):
                for fam in combinations(universe, count):
                    assert pure.minimal_transversals(fam, nbits) == \
                        brute_transversals(list(fam), nbits)

    def test_transversals_random(self):
        rng = random.Random(102)
        for _ in range(100):
            nbits = rng.randint(1, 8)
            fam = [m for m in random_family(rng, nbits, rng.randint(0, 6))]
            assert pure.minimal_transversals(fam, nbits) == \
                brute_transversals(fam, nbits)

    def test_transversal_semantics(self):
        # every output hits every edge and is minimal with that property
        rng = random.Random(103)
        for _ in range(50):
            nbits = rng.randint(1, 7)
            fam = [m | 1 for m in random_family(rng, nbits, rng.randint(1, 5))]
            out = pure.minimal_transversals(fam, nbits)
            for t in out:
                assert all(t & e for e in fam)
                for bit in range(nbits):
                    if t >> bit & 1:
                        smaller = t & ~(1 << bit)
                        assert not all(smaller & e for e in fam)

    def test_phase_orthogonal(self):
        rng = random.Random(104)
        for _ in range(100):
            n = rng.randint(1, 5)
            table = [rng.randrange(n) for _ in range(n * n)]
            pole = rng.randrange(1 << n)
            x = rng.randrange(1 << n)
            assert pure.phase_orthogonal(table, n, pole, x) == \
                brute_phase_orth(table, n, pole, x)


@needs_compiled
class TestCompiledMatchesPure:
    def test_minimize(self):
        rng = random.Random(201)
        for _ in range(300):
            fam = random_family(rng, rng.randint(1, 16), rng.randint(0, 12))
            assert compiled.minimize_family(fam) == pure.minimize_family(fam)

    def test_transversals(self):
        rng = random.Random(202)
        for _ in range(200):
            nbits = rng.randint(1, 10)
            fam = random_family(rng, nbits, rng.randint(0, 7))
            assert compiled.minimal_transversals(fam, nbits) == \
                pure.minimal_transversals(fam, nbits)

    def test_phase_orthogonal(self):
        rng = random.Random(203)
        for _ in range(200):
            n = rng.randint(1, 6)
            table = [rng.randrange(n) for _ in range(n * n)]
            pole = rng.randrange(1 << n)
            x = rng.randrange(1 << n)
            assert compiled.phase_orthogonal(table, n, pole, x) == \
                pure.phase_orthogonal(table, n, pole, x)

    def test_is_antichain(self):
        rng = random.Random(204)
        for _ in range(200):
            fam = random_family(rng, 8, rng.randint(0, 6))
            assert compiled.is_antichain(fam) == pure.is_antichain(fam)

    def test_bit_limit_enforced(self):
        with pytest.raises(ValueError):
            compiled.minimal_transversals([1], 65)


class TestDispatch:
    def test_facade_handles_wide_masks(self):
        from mullsem import _kernels
        wide = 1 << 80
        assert _kernels.minimize_family([wide, wide | 1]) == (wide,)
        out = _kernels.minimal_transversals([wide], 81)
        assert out == (wide,)
