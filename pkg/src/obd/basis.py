"""Additive-basis orders and sums-complement sets for Beatty sequences.

``find_min_basis_order`` decides, for the sequence ``floor(n*alpha+beta)``
with indices n >= 1, the least h (up to a cap) such that every large
enough natural number is a sum of h terms, and enumerates the finite
exceptional set when one exists.  ``sums_complement`` builds the automaton
of positive integers that are not a difference of two terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Automaton
from .numeration import NumerationSystem
from .quadratic import QuadraticReal
from .relations import (BeattySpec, beatty_sync, canonical_recognizer,
                        inequality_relation, linear_relation)


@dataclass
class BasisReport:
    alpha: QuadraticReal
    beta: QuadraticReal
    order: int
    verdict: str  # "basis" | "asymptotic-basis" | "not-basis-at-cap"
    exceptional: list[int] = field(default_factory=list)

    def __str__(self) -> str:
        if self.verdict == "not-basis-at-cap":
            return f"no basis order up to {self.order}"
        tail = "" if not self.exceptional else f", except {self.exceptional}"
        return f"order {self.order} ({self.verdict}{tail})"


def _no_leading_zero(dmax: int) -> Automaton:
    """Strings that are empty or start with a nonzero digit.

    Composing with this picks one representative string per value, so
    language finiteness equals value-set finiteness.
    """
    transitions = [(0, (d,), 1) for d in range(1, dmax + 1)]
    transitions += [(1, (d,), 1) for d in range(dmax + 1)]
    return Automaton.from_transitions(1, dmax, 2, 0, [0, 1], transitions)


def _is_finite_language(aut: Automaton) -> bool:
    """True when the trim part of the automaton has no cycle."""
    n = aut.n_states
    if n == 0:
        return True
    # forward reachability
    reach = [False] * n
    stack = [aut.initial]
    reach[aut.initial] = True
    while stack:
        s = stack.pop()
        for e in range(int(aut.indptr[s]), int(aut.indptr[s + 1])):
            t = int(aut.targets[e])
            if not reach[t]:
                reach[t] = True
                stack.append(t)
    # backward reachability from accepting states
    rev: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for e in range(int(aut.indptr[s]), int(aut.indptr[s + 1])):
            rev[int(aut.targets[e])].append(s)
    co = [bool(a) for a in aut.accepting]
    stack = [s for s in range(n) if co[s]]
    while stack:
        s = stack.pop()
        for t in rev[s]:
            if not co[t]:
                co[t] = True
                stack.append(t)
    live = [reach[s] and co[s] for s in range(n)]
    # cycle detection on the live subgraph
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * n
    for root in range(n):
        if not live[root] or color[root] != WHITE:
            continue
        stack = [(root, int(aut.indptr[root]))]
        color[root] = GRAY
        while stack:
            s, e = stack.pop()
            if e >= int(aut.indptr[s + 1]):
                color[s] = BLACK
                continue
            stack.append((s, e + 1))
            t = int(aut.targets[e])
            if not live[t]:
                continue
            if color[t] == GRAY:
                return False
            if color[t] == WHITE:
                color[t] = GRAY
                stack.append((t, int(aut.indptr[t])))
    return True


def _values_of(aut: Automaton, system: NumerationSystem) -> list[int]:
    """All values of a finite-language unary automaton."""
    tuples = aut.enumerate_values(system, 10 ** 6,
                                  max_len=aut.n_states + 2)
    return sorted(t[0] for t in tuples)


def _range_automaton(system: NumerationSystem, spec: BeattySpec) -> Automaton:
    """Unary automaton for { floor(n*alpha+beta) : n >= 1 }."""
    pairs = beatty_sync(system, spec)
    positive = inequality_relation(system, (1,), 0, ">").lift(2, [0])
    return pairs.intersect(positive).project(0)


def _sum_with(system: NumerationSystem, left: Automaton,
              right: Automaton) -> Automaton:
    """Unary automaton for { a + b : a in left, b in right }."""
    add = linear_relation(system, (1, 1, -1), 0)
    wide = left.lift(3, [0]).intersect(right.lift(3, [1])).intersect(add)
    return wide.project(1).project(0)


def find_min_basis_order(system: NumerationSystem, spec: BeattySpec,
                         cap: int) -> BasisReport:
    """Least h <= cap making the sequence an (asymptotic) basis of order h."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    alpha, beta = spec.alpha(system), spec.beta(system)
    terms = _range_automaton(system, spec)
    canon = canonical_recognizer(system, 1)
    strip = _no_leading_zero(system.dmax)
    reachable = terms
    for h in range(1, cap + 1):
        if h > 1:
            reachable = _sum_with(system, reachable, terms)
        complement = reachable.complement_within(canon)
        if complement.is_empty():
            return BasisReport(alpha, beta, h, "basis")
        trimmed = complement.intersect(strip)
        if _is_finite_language(trimmed):
            return BasisReport(alpha, beta, h, "asymptotic-basis",
                               _values_of(trimmed, system))
    return BasisReport(alpha, beta, cap, "not-basis-at-cap")


def sums_complement(system: NumerationSystem, spec: BeattySpec) -> Automaton:
    """Automaton for { n >= 1 : n is no difference of two sequence terms }.

    Mirrors the reproduction script shape: pairs with indices >= 1, a
    three-track difference atom, projections, then one complement.
    """
    pairs = beatty_sync(system, spec)
    positive = inequality_relation(system, (1,), 0, ">")
    # tracks: m, n, x, y, z with beatty(m,x), beatty(n,y), z + x = y
    first = pairs.lift(5, [0, 2]).intersect(positive.lift(5, [0]))
    second = pairs.lift(5, [1, 3]).intersect(positive.lift(5, [1]))
    diff = linear_relation(system, (1, -1, 1), 0).lift(5, [2, 3, 4])
    joined = first.intersect(second).intersect(diff)
    for track in (3, 2, 1, 0):
        joined = joined.project(track)
    return joined.complement_within(canonical_recognizer(system, 1))
