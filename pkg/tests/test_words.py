"""Free-group word arithmetic: reduction, conjugacy, roots, Gromov products,
and the relator-area search."""

import random
from fractions import Fraction

import pytest

from freeq import words
from freeq.words import Alphabet, Presentation

AB = Alphabet(("a", "b"))


def W(text):
    return AB.parse(text)


def random_reduced(rng, max_len, alphabet=AB):
    n = rng.randint(0, max_len)
    out = []
    while len(out) < n:
        x = rng.choice([1, -1]) * rng.randint(1, alphabet.size)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


class TestFreeReduce:
    def test_cancellation(self):
        assert W("aA") == ()
        assert W("aAb") == W("b")

    def test_cascading_cancellation(self):
        # abBAc: repeated single-pair cancellation leaves c
        abc = Alphabet(("a", "b", "c"))
        assert abc.parse("abBAc") == abc.parse("c")

    def test_idempotent_random(self):
        rng = random.Random(11)
        for _ in range(200):
            w = random_reduced(rng, 12)
            assert words.free_reduce(w) == w

    def test_product_length_bound(self):
        rng = random.Random(12)
        for _ in range(500):
            u = random_reduced(rng, 10)
            v = random_reduced(rng, 10)
            assert len(words.mul(u, v)) <= len(u) + len(v)

    def test_identity_text(self):
        assert W("1") == ()
        assert AB.format(()) == "1"

    def test_unknown_symbol(self):
        with pytest.raises(words.WordSyntaxError):
            W("axb")


class TestCyclicReduce:
    def test_simple(self):
        cyc = words.cyclic_reduce(W("abA"))
        assert AB.format(cyc.core) == "b"
        assert AB.format(cyc.conjugator) == "a"

    def test_already_cyclic(self):
        cyc = words.cyclic_reduce(W("b"))
        assert AB.format(cyc.core) == "b"
        assert cyc.conjugator == ()

    def test_conjugator_witness(self):
        cyc = words.cyclic_reduce(W("Abba"))
        assert AB.format(cyc.core) == "bb"
        assert AB.format(cyc.conjugator) == "A"

    def test_witness_random(self):
        rng = random.Random(13)
        for _ in range(300):
            w = random_reduced(rng, 12)
            cyc = words.cyclic_reduce(w)
            assert words.conjugate(cyc.core, words.inverse(cyc.conjugator)) == w
            # cyclically reduced: no pinch around the seam
            if cyc.core:
                assert cyc.core[0] != -cyc.core[-1] or len(cyc.core) == 1


class TestConjugacy:
    def test_rotation(self):
        assert words.is_conjugate(W("ab"), W("ba"))
        assert words.is_conjugate(W("abAB"), W("bABa"))

    def test_distinct(self):
        assert not words.is_conjugate(W("a"), W("b"))

    def test_witness_verifies(self):
        rng = random.Random(14)
        for _ in range(200):
            w = random_reduced(rng, 8)
            x = random_reduced(rng, 5)
            other = words.conjugate(w, x)
            c = words.conjugacy_witness(w, other)
            assert c is not None
            assert words.conjugate(w, c) == other

    def test_equivalence_and_invariance(self):
        rng = random.Random(15)
        sample = [random_reduced(rng, 6) for _ in range(20)]
        for w in sample:
            assert words.is_conjugate(w, w)
        for u in sample:
            for v in sample:
                assert words.is_conjugate(u, v) == words.is_conjugate(v, u)
                x = random_reduced(rng, 4)
                assert words.is_conjugate(u, v) == words.is_conjugate(
                    words.conjugate(u, x), v
                )


class TestRoots:
    def test_examples(self):
        assert words.extract_root(W("abab")) == (W("ab"), 2)
        assert words.extract_root(W("ab")) == (W("ab"), 1)
        assert words.extract_root(W("aaaaaa")) == (W("a"), 6)

    def test_primitivity(self):
        assert words.is_primitive(W("ab"))
        assert words.is_primitive(W("a"))
        assert not words.is_primitive(W("abab"))

    def test_reconstitution_exhaustive(self):
        # every cyclically reduced word of length <= 8 over two letters
        for w in words.reduced_words(AB, 8):
            if not w or (len(w) > 1 and w[0] == -w[-1]):
                continue
            root, exp = words.extract_root(w)
            assert words.power(root, exp) == w
            assert words.is_primitive(root)

    def test_power_length_exact(self):
        rng = random.Random(16)
        for _ in range(100):
            w = random_reduced(rng, 8)
            cyc = words.cyclic_reduce(w).core
            if not cyc:
                continue
            for n in range(1, 9):
                assert len(words.power(cyc, n)) == n * len(cyc)


class TestGromovProduct:
    def test_examples(self):
        abc = Alphabet(("a", "b", "c"))
        assert words.gromov_product(abc.parse("ab"), abc.parse("ac")) == Fraction(1)
        assert words.gromov_product(W("ab"), W("ab")) == 2
        assert words.gromov_product(W("a"), W("B")) == 0

    def test_common_prefix(self):
        rng = random.Random(17)
        for _ in range(300):
            x = random_reduced(rng, 10)
            y = random_reduced(rng, 10)
            k = 0
            while k < min(len(x), len(y)) and x[k] == y[k]:
                k += 1
            assert words.gromov_product(x, y) == k

    def test_zero_delta_triples(self):
        rng = random.Random(18)
        for _ in range(1000):
            x = random_reduced(rng, 8)
            y = random_reduced(rng, 8)
            z = random_reduced(rng, 8)
            assert words.gromov_product(x, y) >= min(
                words.gromov_product(x, z), words.gromov_product(y, z)
            )


class TestDehnArea:
    def test_single_relator(self):
        a = Alphabet(("a",))
        p = Presentation(a, (a.parse("aaa"),))
        assert words.dehn_area(p, a.parse("aaa"), 4) == 1
        assert words.dehn_area(p, a.parse("aaaaaa"), 4) == 2

    def test_free_group_absent(self):
        p = Presentation(AB, ())
        assert words.dehn_area(p, W("abAB"), 4) is None

    def test_identity(self):
        a = Alphabet(("a",))
        p = Presentation(a, (a.parse("aaa"),))
        assert words.dehn_area(p, (), 4) == 0

    def test_conjugated_relator(self):
        p = Presentation(AB, (W("aaa"),))
        assert words.dehn_area(p, W("baaaB"), 4) == 1
