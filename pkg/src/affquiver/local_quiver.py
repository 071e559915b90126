"""Closed-form quiver of C Aff(R) for local R, and its extension to all finite rings."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .characters import (Character, OrbitDatum, additive_characters, kernel_contains,
                         orbits, restrict, sort_key)
from .quiver import Quiver, VertexLabel, tensor_quiver
from .rings import (FiniteRing, LocalData, NotLocalError, is_chain_ring, is_field, is_local,
                    local_data, local_decomposition)


@dataclass(frozen=True)
class LocalQuiverInput:
    ring: FiniteRing
    data: LocalData
    orbit_data: tuple[OrbitDatum, ...]
    characters: tuple[Character, ...]

    def __post_init__(self):
        covered = sum(o.size for o in self.orbit_data)
        assert covered == len(self.characters) == self.ring.order

    @property
    def orbit_of(self) -> dict[Character, int]:
        cache = self.__dict__.get("_orbit_of")
        if cache is None:
            cache = {c: o.orbit_id for o in self.orbit_data for c in o.members}
            object.__setattr__(self, "_orbit_of", cache)
        return cache


def build_input(R: FiniteRing, rng: random.Random | None = None) -> LocalQuiverInput:
    """Collect local data and orbit data; ``rng`` randomizes all representatives."""
    if not is_local(R):
        raise NotLocalError(f"{R} is not a local ring")
    chars = additive_characters(R)
    return LocalQuiverInput(R, local_data(R, rng), tuple(orbits(R, chars, rng)), tuple(chars))


def simple_label(orbit: OrbitDatum, rho_index: int) -> VertexLabel:
    return VertexLabel.simple(orbit.orbit_id, rho_index, orbit.size)


def vertices(inp: LocalQuiverInput) -> list[VertexLabel]:
    out = [VertexLabel.trivial()]
    for o in inp.orbit_data:
        out.extend(simple_label(o, j) for j in range(len(o.stabilizer_characters)))
    return out


def field_quiver(F: FiniteRing, inp: LocalQuiverInput | None = None) -> Quiver:
    """One arrow, from the trivial module to the induced module of dimension |F|-1."""
    if not is_field(F):
        raise ValueError(f"{F} is not a field")
    inp = inp or build_input(F)
    big = [o for o in inp.orbit_data if not o.members[0].is_trivial]
    assert len(big) == 1 and len(big[0].stabilizer) == 1
    return Quiver.build(vertices(inp), {(VertexLabel.trivial(), simple_label(big[0], 0)): 1})


def trivial_arrow_target(inp: LocalQuiverInput) -> VertexLabel:
    """Target of the unique arrow leaving the trivial module (non-field local rings)."""
    m = inp.data.maximal_ideal
    hits = [
        o for o in inp.orbit_data
        if kernel_contains(o.representative, m) and not o.representative.is_trivial
    ]
    if len(hits) != 1:
        raise AssertionError(f"expected one orbit with m <= ker chi < R, found {len(hits)}")
    # every member of that orbit must satisfy the same condition
    assert all(kernel_contains(c, m) for c in hits[0].members)
    return simple_label(hits[0], 0)


def _rho_index(orbit: OrbitDatum, rho: Character) -> int:
    return orbit.stabilizer_characters.index(rho)


def arrows_between_simples(inp: LocalQuiverInput, all_members: bool = True) -> Counter:
    """Arrows among the simple modules of the unit group.

    For each associate representative ``p`` with annihilator ``a`` and each
    source ``(O, rho)`` with ``a`` inside ``ker chi`` and ``1 + a`` inside
    ``ker rho``, one arrow goes to ``(orbit(chi'), rho|St(chi'))`` for every
    ``chi'`` with ``chi'(p x) = chi(x)``.  Targets are deduplicated per
    ``(p, source)``; different ``p`` add up.  With ``all_members`` every
    ``chi`` in ``O`` is tried, otherwise only the orbit representative.
    """
    R = inp.ring
    key = sort_key(inp.characters)
    orbit_by_id = {o.orbit_id: o for o in inp.orbit_data}
    counts: Counter = Counter()
    for p, ann in zip(inp.data.associate_reps, inp.data.annihilators):
        one_plus = frozenset(int(R.add_table[R.one, a]) for a in ann)
        # chi' -> chi'(p .) ; group the characters by their pull-back along p
        pulled: dict[tuple, list[Character]] = {}
        for c in inp.characters:
            pulled.setdefault(tuple(np.asarray(key(c))[R.mul_table[p]].tolist()), []).append(c)
        for o in inp.orbit_data:
            sources = o.members if all_members else (o.representative,)
            for chi in sources:
                if not kernel_contains(chi, ann):
                    continue
                if not one_plus <= set(o.stabilizer.elements):
                    raise AssertionError(f"1 + ann({p}) not inside the stabilizer of orbit {o.orbit_id}")
                for j, rho in enumerate(o.stabilizer_characters):
                    if not kernel_contains(rho, one_plus):
                        continue
                    src = simple_label(o, j)
                    targets = set()
                    for chi2 in pulled.get(key(chi), ()):
                        o2 = orbit_by_id[inp.orbit_of[chi2]]
                        if not set(o2.stabilizer.elements) <= set(o.stabilizer.elements):
                            raise AssertionError("St(chi') is not contained in St(chi)")
                        rho2 = restrict(rho, o2.stabilizer)
                        targets.add(simple_label(o2, _rho_index(o2, rho2)))
                    for t in targets:
                        counts[(p, src, t)] = 1
    out: Counter = Counter()
    for (_, src, t), m in counts.items():
        out[src, t] += m
    return out


def local_quiver(R: FiniteRing, rng: random.Random | None = None,
                 all_members: bool = True) -> Quiver:
    inp = build_input(R, rng)
    if is_field(R):
        return field_quiver(R, inp)
    arrows = arrows_between_simples(inp, all_members)
    arrows[VertexLabel.trivial(), trivial_arrow_target(inp)] += 1
    q = Quiver.build(vertices(inp), arrows)
    if q.arrows_into(0):
        raise AssertionError("arrow ending at the trivial module")
    return q


def affine_quiver(R: FiniteRing) -> Quiver:
    """Fold the local quivers of the local factors of ``R`` with the tensor rule."""
    quivers = [local_quiver(f.ring) for f in local_decomposition(R)]
    return reduce(tensor_quiver, quivers)


def invariant_violations(R: FiniteRing, q: Quiver | None = None) -> list[str]:
    """Structural checks on the quiver of ``R``; returns human-readable failures."""
    problems = []
    factors = [f.ring for f in local_decomposition(R)]
    q = q if q is not None else affine_quiver(R)
    bottom = [i for i, v in enumerate(q.vertices) if v.is_trivial]
    if len(bottom) != 1:
        return [f"expected one all-trivial vertex, found {len(bottom)}"]
    b = bottom[0]
    if q.arrows_into(b):
        problems.append(f"{q.arrows_into(b)} arrows end at the trivial vertex")
    if q.arrows_out_of(b) != len(factors):
        problems.append(f"{q.arrows_out_of(b)} arrows leave the trivial vertex, expected {len(factors)}")
    for F in factors:
        lq = local_quiver(F)
        if lq.arrows_into(0):
            problems.append(f"{F}: arrows end at the trivial module")
        if lq.arrows_out_of(0) != 1:
            problems.append(f"{F}: {lq.arrows_out_of(0)} arrows leave the trivial module")
        r = local_data(F).r
        base = lq.index(VertexLabel.simple(0, 0, 1))
        if lq.loops_at(base) != r:
            problems.append(f"{F}: {lq.loops_at(base)} loops at W(O0,r0), expected r={r}")
        if is_chain_ring(F) and lq.max_multiplicity() > 1:
            problems.append(f"{F}: multiple arrows in the quiver of a chain ring")
        if is_field(F) and lq.has_path_of_length_two():
            problems.append(f"{F}: field quiver has a path of length 2")
    return problems
