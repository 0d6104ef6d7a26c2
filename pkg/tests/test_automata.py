"""Cross-validation of the CSR automaton engine against the dict-based
reference engine in oracles.py, mostly on randomly generated machines."""

import random

import pytest

from obd.automata import (Automaton, letter_code, letter_digits, lift_codes,
                          nletters, project_letter_map)
from oracles import RefDFA


def csr_words(aut, maxlen):
    """Accepted words of length <= maxlen, straight off the CSR arrays."""
    found = set()
    frontier = [((), aut.initial)]
    for _ in range(maxlen + 1):
        nxt = []
        for w, s in frontier:
            if aut.accepting[s]:
                found.add(w)
            if len(w) < maxlen:
                for e in range(aut.indptr[s], aut.indptr[s + 1]):
                    nxt.append((w + (int(aut.letters[e]),), int(aut.targets[e])))
        frontier = nxt
        if not frontier:
            break
    return found


def random_machine(rng, arity, dmax, n_max=5):
    n = rng.randint(1, n_max)
    nl = nletters(arity, dmax)
    trans = {}
    for s in range(n):
        for letter in range(nl):
            if rng.random() < 0.75:
                trans[(s, letter)] = rng.randrange(n)
    accepting = {s for s in range(n) if rng.random() < 0.45}
    return n, 0, accepting, trans, tuple(range(nl))


def as_pair(spec, arity, dmax):
    n, init, accepting, trans, alphabet = spec
    ref = RefDFA(n, init, accepting, trans, alphabet)
    aut = Automaton.from_transitions(
        arity, dmax, n, init, sorted(accepting),
        [(s, l, t) for (s, l), t in trans.items()])
    aut.validate()
    return ref, aut


SHAPES = [(1, 1), (1, 2), (2, 1), (2, 2)]


class TestLetterCoding:
    def test_round_trip(self):
        for arity, dmax in [(1, 3), (2, 2), (3, 4)]:
            for code in range(nletters(arity, dmax)):
                assert letter_code(letter_digits(code, arity, dmax), dmax) == code

    def test_track0_most_significant(self):
        assert letter_code((1, 0), 2) == 3
        assert letter_code((0, 1), 2) == 1
        assert letter_digits(5, 2, 2) == (1, 2)

    def test_out_of_range_digit(self):
        with pytest.raises(ValueError):
            letter_code((3,), 2)

    def test_project_letter_map(self):
        m = project_letter_map(2, 2, 1)
        for code in range(9):
            assert m[code] == letter_digits(code, 2, 2)[0]
        m0 = project_letter_map(2, 2, 0)
        for code in range(9):
            assert m0[code] == letter_digits(code, 2, 2)[1]

    def test_lift_codes(self):
        table = lift_codes(1, 1, [0], 2)
        # track 0 keeps the old digit, track 1 free
        assert sorted(table[1].tolist()) == [letter_code((1, 0), 1), letter_code((1, 1), 1)]
        with pytest.raises(ValueError):
            lift_codes(2, 1, [1, 0], 3)


class TestBooleanOps:
    def test_products_match_reference(self):
        rng = random.Random(1201)
        for trial in range(60):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            ra, aa = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            rb, ab = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            for op in ("and", "or", "xor", "andnot"):
                got = aa.product(ab, op)
                got.validate()
                assert csr_words(got, 4) == RefDFA.product(ra, rb, op).words(4), \
                    f"trial {trial} op {op}"

    def test_complement_within_universal(self):
        rng = random.Random(77)
        for trial in range(20):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            ra, aa = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            univ = Automaton.universal(arity, dmax)
            comp = aa.complement_within(univ)
            all_words = csr_words(univ, 4)
            assert csr_words(comp, 4) == all_words - ra.words(4)
            # double complement restores the language
            assert comp.complement_within(univ).equivalent(aa)

    def test_ops_with_empty(self):
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        e = Automaton.empty(1, 1)
        assert a.union(e).equivalent(a)
        assert a.intersect(e).is_empty()
        assert a.andnot(e).equivalent(a)
        assert e.andnot(a).is_empty()
        assert a.xor(e).equivalent(a)


class TestCanonicalForm:
    def test_minimal_state_count(self):
        rng = random.Random(5150)
        for trial in range(40):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            ref, aut = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            assert aut.live_states == ref.minimized().live_count(), f"trial {trial}"

    def test_equivalence_is_blind_to_shape(self):
        # same language, different construction: junk states and duplicates
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        b = Automaton.from_transitions(
            1, 1, 5, 2,
            [3, 4],
            [(2, 1, 3), (3, 0, 4), (4, 0, 3), (0, 0, 1), (1, 1, 0)])
        assert a.equivalent(b)
        assert a.canonical_bytes() == b.canonical_bytes()
        assert a.sha() == b.sha()

    def test_canonicalization_idempotent(self):
        rng = random.Random(99)
        for trial in range(20):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            _, aut = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            again = aut._canonical()
            assert aut.canonical_bytes() == again.canonical_bytes()

    def test_empty_language_convention(self):
        e = Automaton.from_transitions(1, 2, 3, 0, [], [(0, 1, 1), (1, 0, 2)])
        assert e.is_empty() and e.live_states == 0 and e.n_states == 1
        assert e.equivalent(Automaton.empty(1, 2))


class TestTrackSurgery:
    def test_projection_matches_reference(self):
        rng = random.Random(4096)
        for trial in range(40):
            dmax = 1 + trial % 2
            ref, aut = as_pair(random_machine(rng, 2, dmax), 2, dmax)
            track = trial % 2
            got = aut.project(track)
            got.validate()
            keep = 1 - track

            def proj_accepts(digit_word):
                # NFA membership in the raw projection image
                states = {ref.initial}
                for d in digit_word:
                    nxt = set()
                    for full in ref.alphabet:
                        if letter_digits(full, 2, dmax)[keep] == d:
                            for s in states:
                                t = ref.trans.get((s, full))
                                if t is not None:
                                    nxt.add(t)
                    states = nxt
                return bool(states & ref.accepting)

            # u is kept iff some zero-prefixed variant is in the image; the
            # prefix pumps down below the state count
            expected = set()
            import itertools
            for length in range(5):
                for u in itertools.product(range(dmax + 1), repeat=length):
                    if any(proj_accepts((0,) * j + u) for j in range(ref.n + 1)):
                        expected.add(tuple(letter_code((d,), dmax) for d in u))
            assert csr_words(got, 4) == expected, f"trial {trial}"

    def test_projection_semantics_exact_small(self):
        # hand-checked: equality relation projected is everything
        eq = Automaton.from_transitions(2, 2, 1, 0, [0],
                                        [(0, (d, d), 0) for d in range(3)])
        assert eq.project(0).equivalent(Automaton.universal(1, 2))
        assert eq.project(1).equivalent(Automaton.universal(1, 2))

    def test_lift_then_project_round_trip(self):
        # for a padding-closed language, adding a free track and projecting
        # it away changes nothing
        rng = random.Random(31337)
        for trial in range(15):
            ref, aut = as_pair(random_machine(rng, 1, 2), 1, 2)
            p = aut.pad_normalized()
            lifted = p.lift(2, [0])
            lifted.validate()
            assert lifted.project(1).equivalent(p), f"trial {trial}"

    def test_lift_places_tracks(self):
        eq = Automaton.from_transitions(2, 1, 1, 0, [0],
                                        [(0, (d, d), 0) for d in range(2)])
        lifted = eq.lift(3, [0, 2])
        assert lifted.accepts_digit_rows([[1], [0], [1]])
        assert lifted.accepts_digit_rows([[1], [1], [1]])
        assert not lifted.accepts_digit_rows([[1], [0], [0]])

    def test_reverse(self):
        rng = random.Random(2718)
        for trial in range(25):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            ref, aut = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            rev = aut.reverse_determinized()
            rev.validate()
            assert csr_words(rev, 4) == {w[::-1] for w in ref.words(4)}

    def test_pad_normalized(self):
        rng = random.Random(1618)
        for trial in range(25):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            ref, aut = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            nrm = aut.pad_normalized()
            nrm.validate()

            # u is kept iff L contains strip(u) with some pumpable zero prefix
            def strip(w):
                while w and w[0] == 0:
                    w = w[1:]
                return w

            def expected_member(u):
                s = strip(u)
                return any(ref.accepts((0,) * j + s) for j in range(ref.n + 2))

            expected = {w for w in csr_words(Automaton.universal(arity, dmax), 4)
                        if expected_member(w)}
            assert csr_words(nrm, 4) == expected, f"trial {trial}"
            # and the result is padding closed
            zero = (0,)
            for w in csr_words(nrm, 3):
                assert nrm.accepts_word(zero + w)


class TestFiniteness:
    def test_finite_and_infinite(self):
        # single word
        one = Automaton.from_transitions(1, 1, 3, 0, [2], [(0, 1, 1), (1, 1, 2)])
        assert one.is_value_finite()
        # a cycle on the accepting path
        loop = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        assert not loop.is_value_finite()
        assert Automaton.empty(1, 1).is_value_finite()
        # 0* only: one value
        zeros = Automaton.from_transitions(1, 1, 1, 0, [0], [(0, 0, 0)])
        assert zeros.is_value_finite()

    def test_enumerate_words_order(self):
        loop = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        ws = loop.enumerate_words(4)
        assert ws == [(1,), (1, 0), (1, 0, 0), (1, 0, 0, 0)]


class TestCombine:
    def test_first_match_and_default(self):
        rng = random.Random(808)
        univ = Automaton.universal(1, 2)
        ra, aa = as_pair(random_machine(rng, 1, 2), 1, 2)
        rb, ab = as_pair(random_machine(rng, 1, 2), 1, 2)
        w = Automaton.combine([aa, ab], [7, 3], univ)
        w.validate()
        for word in csr_words(univ, 4):
            s = w.walk(word)
            expect = 7 if ra.accepts(word) else (3 if rb.accepts(word) else 0)
            assert int(w.outputs[s]) == expect, word

    def test_outputs_survive_text_round_trip(self):
        univ = Automaton.universal(1, 1)
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        w = Automaton.combine([a], [4], univ)
        name, back = Automaton.from_text(w.to_text("msd_t"))
        assert back.outputs is not None
        assert back.to_text("msd_t") == w.to_text("msd_t")


class TestSerialization:
    def test_round_trip_random(self):
        rng = random.Random(616)
        for trial in range(20):
            arity, dmax = SHAPES[trial % len(SHAPES)]
            _, aut = as_pair(random_machine(rng, arity, dmax), arity, dmax)
            name, back = Automaton.from_text(aut.to_text("msd_x"))
            assert name == "msd_x"
            back.validate()
            assert back.to_text("msd_x") == aut.to_text("msd_x")
            assert back.equivalent(aut)

    def test_arity0_text(self):
        t = Automaton.universal(0, 3)
        name, back = Automaton.from_text(t.to_text("msd_s"))
        assert back.arity == 0 and back.decide()

    def test_dot_smoke(self):
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1)])
        dot = a.to_dot("ex")
        assert "digraph" in dot and "doublecircle" in dot

    def test_walk_dead_end(self):
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1)])
        assert a.walk([1, 1]) == -1
        assert not a.accepts_word([1, 1])
        assert a.accepts_word([1])


class TestDegenerate:
    def test_arity0_universe(self):
        t = Automaton.universal(0, 2)
        assert t.decide()
        assert t.accepts_word([])
        f = Automaton.empty(0, 2)
        assert not f.decide()
        assert t.andnot(f).decide()
        assert t.andnot(t).is_empty()

    def test_project_to_sentence(self):
        # one track, accepts anything nonempty starting 1: projecting the
        # only track leaves a true sentence
        a = Automaton.from_transitions(1, 1, 2, 0, [1], [(0, 1, 1), (1, 0, 1), (1, 1, 1)])
        s = a.project(0)
        assert s.arity == 0 and s.decide()
        assert Automaton.empty(1, 1).project(0).decide() is False
