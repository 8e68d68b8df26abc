"""Exact algebra of ultimately periodic subsets of N = {1, 2, 3, ...}.

An ultimately periodic set is given by a finite exception region
``[1..threshold]`` plus a union of residue classes modulo a fixed period
that governs everything beyond the threshold.  These sets form a boolean
algebra; every operation here is exact and equality is decided on a
canonical form (minimal period first, then minimal threshold).

The natural numbers start at 1 throughout.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator


class NotInfiniteError(ValueError):
    """An operation that needs an infinite set was given a finite one."""


class EmptySetError(ValueError):
    """An operation that needs a nonempty set was given the empty one."""


@dataclass(frozen=True)
class Cardinality:
    kind: str  # "empty" | "finite" | "infinite"
    count: int | None  # exact element count unless infinite

    def __str__(self) -> str:
        if self.kind == "finite":
            return f"finite({self.count})"
        return self.kind


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class UPSet:
    """An ultimately periodic subset of N, always stored in canonical form.

    Membership: ``n in S`` iff ``n <= threshold and n in exceptions`` or
    ``n > threshold and n % period in residues``.
    """

    threshold: int
    exceptions: frozenset[int]
    period: int
    residues: frozenset[int]

    def __post_init__(self) -> None:
        t, e, p, r = self.threshold, frozenset(self.exceptions), self.period, frozenset(self.residues)
        if t < 0:
            raise ValueError(f"threshold must be >= 0, got {t}")
        if p < 1:
            raise ValueError(f"period must be >= 1, got {p}")
        if not all(1 <= n <= t for n in e):
            raise ValueError(f"exceptions must lie in [1..{t}]: {sorted(e)}")
        if not all(0 <= x < p for x in r):
            raise ValueError(f"residues must lie in [0..{p - 1}]: {sorted(r)}")
        # minimal period: smallest divisor d of p whose shift leaves the
        # residue profile invariant
        for d in _divisors(p):
            if all(((x + d) % p in r) == (x in r) for x in range(p)):
                r = frozenset(x % d for x in r)
                p = d
                break
        # minimal threshold: strip exceptions that agree with the tail
        e_mut = set(e)
        while t >= 1 and ((t in e_mut) == (t % p in r)):
            e_mut.discard(t)
            t -= 1
        object.__setattr__(self, "threshold", t)
        object.__setattr__(self, "exceptions", frozenset(e_mut))
        object.__setattr__(self, "period", p)
        object.__setattr__(self, "residues", r)

    # ---- constructors -------------------------------------------------

    @staticmethod
    def empty() -> UPSet:
        return UPSet(0, frozenset(), 1, frozenset())

    @staticmethod
    def naturals() -> UPSet:
        return UPSet(0, frozenset(), 1, frozenset({0}))

    @staticmethod
    def from_elements(elems: Iterable[int]) -> UPSet:
        es = frozenset(elems)
        if not all(n >= 1 for n in es):
            raise ValueError(f"elements must be >= 1: {sorted(es)}")
        t = max(es, default=0)
        return UPSet(t, es, 1, frozenset())

    @staticmethod
    def residue_class(residue: int, period: int) -> UPSet:
        """All n >= 1 with n % period == residue."""
        return UPSet(0, frozenset(), period, frozenset({residue % period}))

    # ---- membership and size ------------------------------------------

    def member(self, n: int) -> bool:
        if n < 1:
            raise ValueError(f"membership is defined for n >= 1, got {n}")
        if n <= self.threshold:
            return n in self.exceptions
        return n % self.period in self.residues

    def __contains__(self, n: int) -> bool:
        return self.member(n)

    def cardinality(self) -> Cardinality:
        if self.residues:
            return Cardinality("infinite", None)
        k = len(self.exceptions)
        return Cardinality("empty" if k == 0 else "finite", k)

    @property
    def is_infinite(self) -> bool:
        return bool(self.residues)

    @property
    def is_empty(self) -> bool:
        return not self.residues and not self.exceptions

    # ---- boolean algebra ----------------------------------------------

    def _combine(self, other: UPSet, keep) -> UPSet:
        p = self.period * other.period // gcd(self.period, other.period)
        t = max(self.threshold, other.threshold)
        residues = frozenset(
            r for r in range(p)
            if keep(r % self.period in self.residues, r % other.period in other.residues)
        )
        exceptions = frozenset(n for n in range(1, t + 1) if keep(self.member(n), other.member(n)))
        return UPSet(t, exceptions, p, residues)

    def union(self, other: UPSet) -> UPSet:
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other: UPSet) -> UPSet:
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: UPSet) -> UPSet:
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> UPSet:
        """Complement with respect to N."""
        return UPSet(
            self.threshold,
            frozenset(n for n in range(1, self.threshold + 1) if n not in self.exceptions),
            self.period,
            frozenset(r for r in range(self.period) if r not in self.residues),
        )

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: UPSet) -> bool:
        return self.difference(other).is_empty

    def isdisjoint(self, other: UPSet) -> bool:
        return self.intersect(other).is_empty

    # ---- structure ------------------------------------------------------

    def split_two_infinite(self) -> tuple[UPSet, UPSet]:
        """Split an infinite set into two disjoint infinite halves.

        Deterministic: every residue class is refined modulo twice the
        period; the half containing the class's smallest tail element goes
        to the first part, which also keeps all exceptions.
        """
        if not self.is_infinite:
            raise NotInfiniteError(f"cannot split non-infinite set {self}")
        p2 = 2 * self.period
        first, second = set(), set()
        for r in self.residues:
            # smallest element beyond the threshold congruent to r
            n0 = self.threshold + 1 + ((r - (self.threshold + 1)) % self.period)
            low = n0 % p2
            first.add(low)
            second.add((low + self.period) % p2)
        s1 = UPSet(self.threshold, self.exceptions, p2, frozenset(first))
        s2 = UPSet(self.threshold, frozenset(), p2, frozenset(second))
        return s1, s2

    def affine_preimage(self, a: int, b: int) -> UPSet:
        """The set {n >= 1 | a*n + b in self} for the map n -> a*n + b.

        Requires a >= 1 and a + b >= 1 so the map stays inside N.
        """
        if a < 1 or a + b < 1:
            raise ValueError(f"map n -> {a}*n + {b} leaves N")
        p = self.period
        t = max(0, self.threshold - b)
        exceptions = frozenset(n for n in range(1, t + 1) if self.member(a * n + b))
        residues = frozenset(r for r in range(p) if (a * r + b) % p in self.residues)
        return UPSet(t, exceptions, p, residues)

    # ---- enumeration -----------------------------------------------------

    def __iter__(self) -> Iterator[int]:
        """Members in increasing order (endless when the set is infinite)."""
        for n in sorted(self.exceptions):
            yield n
        if not self.residues:
            return
        n = self.threshold + 1
        while True:
            if n % self.period in self.residues:
                yield n
            n += 1

    def first(self, k: int) -> tuple[int, ...]:
        return tuple(itertools.islice(self, k))

    def least(self) -> int:
        if self.is_empty:
            raise EmptySetError("least element of the empty set")
        return next(iter(self))

    def random_element(self, rng: random.Random, window: int = 64) -> int:
        """A seed-deterministic member, drawn from the first `window` members."""
        if self.is_empty:
            raise EmptySetError("cannot sample from the empty set")
        card = self.cardinality()
        bound = window if card.kind == "infinite" else min(window, card.count)
        idx = rng.randrange(bound)
        return self.first(idx + 1)[idx]

    # ---- presentation ------------------------------------------------------

    def __str__(self) -> str:
        exc = "{" + ",".join(map(str, sorted(self.exceptions))) + "}" if self.exceptions else "∅"
        res = "{" + ",".join(map(str, sorted(self.residues))) + "}" if self.residues else "∅"
        return f"{{{exc} | {self.period} : {res}}}"


def algebra(op: str, s: UPSet, t: UPSet | None = None) -> UPSet:
    """Apply a named boolean operation; `complement` is unary."""
    if op == "complement":
        if t is not None:
            raise ValueError("complement is unary")
        return s.complement()
    if t is None:
        raise ValueError(f"{op} needs two operands")
    if op == "union":
        return s.union(t)
    if op == "intersect":
        return s.intersect(t)
    if op == "difference":
        return s.difference(t)
    raise ValueError(f"unknown operation {op!r}")


def sample_and_enumerate(s: UPSet, k: int, rng_seed: int) -> tuple[tuple[int, ...], int]:
    """The k smallest members plus one seed-deterministic random member."""
    return s.first(k), s.random_element(random.Random(rng_seed))
