"""Exact characters of finite abelian groups with values in Q/Z.

A character is stored as integer numerators over a common modulus ``N``:
the value at ``x`` is ``values[i] / N`` (mod 1) where ``i`` is the
position of ``x`` in ``domain``.  The modulus is always reduced, so equal
characters compare equal.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .rings import FiniteRing


@dataclass(frozen=True)
class Character:
    domain: tuple[int, ...]
    values: tuple[int, ...]
    modulus: int

    @classmethod
    def make(cls, domain, values, modulus: int) -> "Character":
        values = [int(v) % modulus for v in values]
        g = reduce(math.gcd, values, modulus)
        return cls(tuple(int(d) for d in domain), tuple(v // g for v in values), modulus // g)

    def __call__(self, x: int) -> Fraction:
        return Fraction(self.values[self._pos[x]], self.modulus)

    @property
    def _pos(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos_cache")
        if pos is None:
            pos = {x: i for i, x in enumerate(self.domain)}
            object.__setattr__(self, "_pos_cache", pos)
        return pos

    def table(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.modulus) for v in self.values)

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    @property
    def kernel(self) -> frozenset[int]:
        return frozenset(x for x, v in zip(self.domain, self.values) if v == 0)

    def complex_values(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.asarray(self.values, dtype=float) / self.modulus)


def sort_key(chars: Sequence[Character]):
    """Key function giving the lexicographic order of value tables."""
    L = reduce(math.lcm, (c.modulus for c in chars), 1)
    return lambda c: tuple(v * (L // c.modulus) for v in c.values)


def _element_order(x: int, op: np.ndarray, identity: int) -> int:
    k, y = 1, x
    while y != identity:
        y = int(op[y, x])
        k += 1
    return k


def dual_group(elements: Sequence[int], op: np.ndarray, identity: int) -> list[Character]:
    """All characters of the finite abelian group ``elements`` under table ``op``.

    Generators are taken greedily by maximal order among elements not yet
    covered; each character of the subgroup built so far extends to the
    next generator ``g`` in exactly ``m`` ways, ``m`` being the order of
    ``g`` modulo that subgroup.  Result is sorted by value table.
    """
    elements = sorted(int(x) for x in elements)
    orders = {x: _element_order(x, op, identity) for x in elements}
    N = reduce(math.lcm, orders.values(), 1)
    by_order = sorted(elements, key=lambda x: (-orders[x], x))

    sub = [identity]                       # elements of current subgroup, in build order
    in_sub = {identity}
    vals = np.zeros((1, 1), dtype=np.int64)  # vals[c, i] = numerator of character c at sub[i]
    for g in by_order:
        if g in in_sub:
            continue
        # m = order of g modulo the current subgroup
        m, y = 1, g
        while y not in in_sub:
            y = int(op[y, g])
            m += 1
        at_mg = vals[:, sub.index(y)]          # chi(m*g), divisible by m
        assert (at_mg % m == 0).all()
        base = at_mg // m
        cosets = [np.asarray(sub)]
        for j in range(1, m):
            cosets.append(op[cosets[-1], g])
        new_sub = np.concatenate(cosets).tolist()
        blocks = []
        for t in range(m):
            choice = (base + t * (N // m)) % N     # candidate values of chi(g)
            blocks.append(np.concatenate(
                [(vals + j * choice[:, None]) % N for j in range(m)], axis=1))
        vals = np.concatenate(blocks, axis=0)
        sub = new_sub
        in_sub = set(sub)
    assert len(sub) == len(elements) and vals.shape[0] == len(elements)
    order = np.argsort(sub)
    domain = tuple(sorted(sub))
    chars = [Character.make(domain, row[order], N) for row in vals]
    chars.sort(key=sort_key(chars))
    return chars


def additive_characters(R: FiniteRing) -> list[Character]:
    """The |R| characters of (R, +), trivial character first."""
    return dual_group(range(R.order), R.add_table, R.zero)


def act(R: FiniteRing, u: int, chi: Character) -> Character:
    """The character ``a -> chi(u a)``."""
    if u not in set(R.units):
        raise ValueError(f"{R.element_name(u)} is not a unit of {R}")
    vals = np.asarray(chi.values)[R.mul_table[u]]
    return Character(chi.domain, tuple(int(v) for v in vals), chi.modulus)


@dataclass(frozen=True)
class UnitSubgroup:
    elements: tuple[int, ...]

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)


def unit_subgroup(R: FiniteRing, elements) -> UnitSubgroup:
    els = tuple(sorted(set(int(x) for x in elements)))
    units = set(R.units)
    if R.one not in els or not set(els) <= units:
        raise ValueError("a unit subgroup must contain 1 and only units")
    s = set(els)
    for a in els:
        for b in els:
            if int(R.mul_table[a, b]) not in s:
                raise ValueError(f"not closed: {a}*{b}")
    return UnitSubgroup(els)


def subgroup_characters(R: FiniteRing, H: UnitSubgroup) -> list[Character]:
    return dual_group(H.elements, R.mul_table, R.one)


def restrict(rho: Character, H: UnitSubgroup | Sequence[int]) -> Character:
    sub = H.elements if isinstance(H, UnitSubgroup) else tuple(sorted(H))
    pos = rho._pos
    missing = [x for x in sub if x not in pos]
    if missing:
        raise ValueError(f"restriction target not contained in domain: {missing}")
    return Character.make(sub, [rho.values[pos[x]] for x in sub], rho.modulus)


def kernel_contains(chi: Character, S) -> bool:
    pos = chi._pos
    return all(chi.values[pos[s]] == 0 for s in S)


@dataclass(frozen=True)
class OrbitDatum:
    orbit_id: int
    members: tuple[Character, ...]
    representative: Character
    stabilizer: UnitSubgroup
    stabilizer_characters: tuple[Character, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.members)


def orbits(R: FiniteRing, chars: Sequence[Character] | None = None,
           rng: random.Random | None = None) -> list[OrbitDatum]:
    """U(R)-orbits on the additive characters, ordered by least member.

    Orbit ids and member order are canonical; ``rng`` only changes which
    member is reported as ``representative``.
    """
    chars = list(chars) if chars is not None else additive_characters(R)
    units = R.units
    key = sort_key(chars)
    table = np.array([key(c) for c in chars], dtype=np.int64)
    lookup = {tuple(row): i for i, row in enumerate(table.tolist())}
    # acted[u][i] = index of act(u, chars[i])
    acted = {}
    for u in units:
        moved = table[:, R.mul_table[u]]
        acted[u] = [lookup[tuple(row)] for row in moved.tolist()]

    assigned = [-1] * len(chars)
    out = []
    for i in range(len(chars)):
        if assigned[i] >= 0:
            continue
        member_ids = sorted({acted[u][i] for u in units})
        oid = len(out)
        for j in member_ids:
            assigned[j] = oid
        stabs = {tuple(u for u in units if acted[u][j] == j) for j in member_ids}
        if len(stabs) != 1:
            raise AssertionError("stabilizer is not constant along an orbit")
        stab = UnitSubgroup(stabs.pop())
        assert len(member_ids) * len(stab) == len(units)
        members = tuple(chars[j] for j in member_ids)
        rep = rng.choice(members) if rng else members[0]
        out.append(OrbitDatum(oid, members, rep, stab,
                              tuple(subgroup_characters(R, stab))))
    return out
