"""Shared builders and independent oracles for the test suite.

The oracles here deliberately re-derive results along a different route than
the library (set enumeration instead of streaming scans, endpoint enumeration
instead of the sorted-sample formula) so that agreement is evidence, not
tautology.
"""

from __future__ import annotations

import random
from fractions import Fraction

from cantornorm import (ChampernowneBits, ConstantBits, ConstantHalt, Oracle,
                        OracleBits, PeriodicBits, RationalBits, Registry,
                        TableBits, TableHalt)


def zero_registry(n: int) -> Registry:
    return Registry.assemble([(ConstantBits(0), ConstantHalt(0))] * n)


def one_registry(n: int) -> Registry:
    return Registry.assemble([(ConstantBits(1), ConstantHalt(0))] * n)


def random_generator(rng: random.Random, allow_ones_tail: bool = True):
    kinds = ["constant", "periodic", "table", "rational", "champernowne"]
    kind = rng.choice(kinds)
    if kind == "constant":
        bit = rng.randint(0, 1) if allow_ones_tail else 0
        return ConstantBits(bit)
    if kind == "periodic":
        length = rng.randint(1, 6)
        pattern = [rng.randint(0, 1) for _ in range(length)]
        if not allow_ones_tail and all(pattern):
            pattern[rng.randrange(length)] = 0
        return PeriodicBits(tuple(pattern))
    if kind == "table":
        count = rng.randint(0, 6)
        table = {rng.randint(0, 100): rng.randint(0, 1) for _ in range(count)}
        default = rng.randint(0, 1) if allow_ones_tail else 0
        return TableBits(table, default)
    if kind == "rational":
        den = rng.randint(2, 64)
        return RationalBits(rng.randrange(den), den)
    return ChampernowneBits()


def random_halt(rng: random.Random, cap: int = 50) -> ConstantHalt | TableHalt:
    # constant/table rules keep every halting time <= cap at every position
    if rng.random() < 0.5:
        return ConstantHalt(rng.randint(0, cap))
    count = rng.randint(0, 5)
    table = {rng.randint(0, 120): rng.randint(0, cap) for _ in range(count)}
    return TableHalt(table, rng.randint(0, cap))


def random_registry(rng: random.Random, entries: int = 6, halt_cap: int = 50,
                    oracle: Oracle | None = None,
                    oracle_at: tuple[int, ...] = ()) -> Registry:
    programs = []
    for i in range(entries):
        if i in oracle_at:
            generator = OracleBits(oracle)
        else:
            generator = random_generator(rng)
        programs.append((generator, random_halt(rng, cap=halt_cap)))
    return Registry.assemble(programs, oracle=oracle)


def brute_star_discrepancy(points) -> Fraction:
    """Endpoint enumeration: for anchored intervals [0, t) the deviation
    |#(x < t)/n - t| is extremal at sample values and just past them."""
    pts = sorted(Fraction(p) for p in points)
    n = len(pts)
    worst = Fraction(0)
    for t in set(pts) | {Fraction(1)}:
        below = sum(1 for x in pts if x < t)
        at_or_below = sum(1 for x in pts if x <= t)
        worst = max(worst,
                    abs(Fraction(below, n) - t),
                    abs(Fraction(at_or_below, n) - t))
    return worst


def stage_rule_oracle(registry: Registry, stage: int) -> tuple[int, ...]:
    """Independent re-implementation of the staged build: materialize both
    candidate sets over the whole scan window, pick the bit whose set has
    enough members (0 wins ties), and take its smallest members."""
    values = [0]
    for t in range(stage):
        cut = values[-1]
        quota = 2 * 3 ** t
        window = list(range(cut + 1, cut + 4 * 3 ** t + 1))
        candidates = {
            k: sorted(p for p in window
                      if registry.eval_bounded(t, stage + 1, p) == k)
            for k in (0, 1)
        }
        k = min(k for k in (0, 1) if len(candidates[k]) >= quota)
        values.extend(candidates[k][:quota])
    return tuple(values)
