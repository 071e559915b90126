"""Brute-force quiver of C Aff(R) for local R, straight from the monoid.

The affine monoid is materialized as a multiplication table, Green's
relations are computed by comparing principal ideals, and arrow counts
are multiplicities of irreducible characters of ``G_f x G_e`` in the
module U-flat spanned inside the permutation module on the classes of
the congruence-like relation on ``fMe``.  Everything up to the final
character inner product is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .characters import orbits
from .linalg import integer_scaled, rows_in_span, rref_basis
from .quiver import Quiver, VertexLabel
from .rings import FiniteRing, NotLocalError, is_local

ORACLE_LIMIT = 4096     # largest monoid order |R|^2 the oracle accepts
INTEGRALITY_TOL = 1e-6


class HypothesisError(RuntimeError):
    """The idempotents do not generate an R-trivial monoid."""


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    mul: np.ndarray = field(repr=False)
    identity: int
    labels: tuple = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def idempotents(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(np.diagonal(self.mul) == np.arange(self.order))]


def monoid_from_table(table) -> FiniteMonoid:
    mul = np.asarray(table, dtype=np.int64)
    n = mul.shape[0]
    idx = np.arange(n)
    if not np.array_equal(mul[mul], mul[idx[:, None, None], mul[None, :, :]]):
        raise ValueError("table is not associative")
    ids = [e for e in range(n) if (mul[e] == idx).all() and (mul[:, e] == idx).all()]
    if not ids:
        raise ValueError("table has no identity")
    return FiniteMonoid(mul, ids[0])


def build_aff(R: FiniteRing) -> FiniteMonoid:
    """Aff(R) with element ``a*|R| + b`` standing for ``x -> a x + b``.

    ``mul[s, t]`` is the composite ``s o t`` (apply ``t`` first), so
    ``(a x + b) o (c x + d) = ac x + (ad + b)``.
    """
    n = R.order
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    ac = R.mul_table[a[:, None], a[None, :]]
    ad_b = R.add_table[R.mul_table[a[:, None], b[None, :]], b[:, None]]
    mul = ac * n + ad_b
    labels = tuple(zip(a.tolist(), b.tolist()))
    return FiniteMonoid(mul, R.one * n + R.zero, labels)


# ------------------------------------------------------------------ Green


@dataclass(frozen=True, eq=False)
class GreenData:
    r_classes: tuple[tuple[int, ...], ...]
    l_classes: tuple[tuple[int, ...], ...]
    j_classes: tuple[tuple[int, ...], ...]
    idempotents: tuple[int, ...]
    regular_j: tuple[tuple[int, ...], ...]
    l_tilde_classes: tuple[tuple[int, ...], ...]
    r_of: np.ndarray = field(repr=False)
    l_of: np.ndarray = field(repr=False)
    j_of: np.ndarray = field(repr=False)
    lt_of: np.ndarray = field(repr=False)
    below: np.ndarray = field(repr=False)   # below[m, t]: t lies in MmM

    def ideal(self, n: int) -> np.ndarray:
        """``I(n)``: elements ``m`` with ``n`` outside ``MmM``."""
        return np.flatnonzero(~self.below[:, n])

    def r_class(self, x: int) -> tuple[int, ...]:
        return self.r_classes[self.r_of[x]]

    def l_class(self, x: int) -> tuple[int, ...]:
        return self.l_classes[self.l_of[x]]

    def l_tilde_class(self, x: int) -> tuple[int, ...]:
        return self.l_tilde_classes[self.lt_of[x]]


def _partition(rows: np.ndarray) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """Group indices with identical rows, in order of first appearance."""
    groups: dict[bytes, list[int]] = {}
    for i, row in enumerate(rows):
        groups.setdefault(row.tobytes(), []).append(i)
    classes = tuple(tuple(g) for g in groups.values())
    of = np.empty(len(rows), dtype=np.int64)
    for k, cls in enumerate(classes):
        of[list(cls)] = k
    return classes, of


def green_data(M: FiniteMonoid) -> GreenData:
    n = M.order
    idx = np.arange(n)
    right = np.zeros((n, n), dtype=bool)
    right[idx[:, None], M.mul] = True            # right[m, s]: s in mM
    left = np.zeros((n, n), dtype=bool)
    left[idx[:, None], M.mul.T] = True           # left[m, s]: s in Mm
    below = (right.astype(np.float32) @ left.astype(np.float32)) > 0
    r_classes, r_of = _partition(right)
    l_classes, l_of = _partition(left)
    j_classes, j_of = _partition(below)
    E = M.idempotents()
    regular = tuple(c for c in j_classes if any(e in c for e in E))
    profile = M.mul[:, E] == idx[:, None]        # profile[m, k]: m e_k = m
    lt_classes, lt_of = _partition(profile)
    return GreenData(r_classes, l_classes, j_classes, tuple(E), regular, lt_classes,
                     r_of, l_of, j_of, lt_of, below)


def check_r_trivial_idempotent_submonoid(M: FiniteMonoid) -> bool:
    E = M.idempotents()
    sub = {M.identity, *E}
    frontier = list(sub)
    while frontier:
        nxt = []
        for s in frontier:
            for e in E:
                t = int(M.mul[s, e])
                if t not in sub:
                    sub.add(t)
                    nxt.append(t)
        frontier = nxt
    elems = sorted(sub)
    seen = set()
    for m in elems:
        ideal = frozenset(M.mul[m, elems].tolist())
        if ideal in seen:
            return False
        seen.add(ideal)
    return True


# ------------------------------------------------------------------ U-flat


def _units_of_corner(M: FiniteMonoid, f: int) -> tuple[tuple[int, ...], dict[int, int]]:
    """The maximal subgroup ``G_f`` and its inverse map."""
    corner = np.unique(M.mul[f][M.mul[:, f]])    # f m f
    sub = M.mul[np.ix_(corner, corner)]
    group, inv = [], {}
    for i, m in enumerate(corner):
        hits = np.flatnonzero((sub[i] == f) & (sub[:, i] == f))
        if hits.size:
            group.append(int(m))
            inv[int(m)] = int(corner[hits[0]])
    return tuple(group), inv


def _generators(M: FiniteMonoid, group: tuple[int, ...], identity: int) -> list[int]:
    gens, span = [], {identity}
    for g in group:
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                for h in gens:
                    t = int(M.mul[s, h])
                    if t not in span:
                        span.add(t)
                        nxt.append(t)
            frontier = nxt
    return gens


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass(frozen=True, eq=False)
class UFlatInstance:
    monoid: FiniteMonoid = field(repr=False)
    e: int
    f: int
    classes: tuple[tuple[int, ...], ...]        # the set X
    class_of: np.ndarray = field(repr=False)    # element -> X index, -1 if outside X
    spanning_vectors: tuple[dict[int, int], ...] = field(repr=False)
    group_f: tuple[int, ...] = field(repr=False)
    group_e: tuple[int, ...] = field(repr=False)
    inverse: dict[int, int] = field(repr=False)
    basis: np.ndarray = field(repr=False)       # integer rows, RREF scaled by `denominator`
    pivots: tuple[int, ...] = ()
    denominator: int = 1

    @property
    def dimension(self) -> int:
        return len(self.pivots)

    @property
    def group(self) -> list[tuple[int, int]]:
        return [(g, h) for g in self.group_f for h in self.group_e]

    def permutation(self, g: int, h: int) -> np.ndarray:
        """Image of each class of X under ``[m] -> [g m h^-1]``."""
        mul = self.monoid.mul
        reps = np.array([c[0] for c in self.classes], dtype=np.int64)
        return self.class_of[mul[mul[g, reps], self.inverse[h]]]

    @cached_property
    def conjugacy(self) -> tuple:
        """Conjugacy classes of ``G_f`` and ``G_e``: (representatives, sizes, class index) each."""
        return (_conjugacy_classes(self.monoid, self.group_f, self.inverse),
                _conjugacy_classes(self.monoid, self.group_e, self.inverse))

    @cached_property
    def class_traces(self) -> np.ndarray:
        """Exact trace of ``(g, h)`` on U-flat for conjugacy class representatives.

        With ``B`` the RREF basis and pivots ``c_j``, the map
        ``v -> sum_j v[c_j] B_j`` projects onto U-flat, so the trace of
        ``(g, h)`` there is ``sum_j B_j[pi^-1(c_j)]``.  Traces are class
        functions, so one pair of representatives per class pair suffices.
        """
        mul = self.monoid.mul
        (reps_f, _, _), (reps_e, _, _) = self.conjugacy
        k = self.dimension
        out = np.zeros((len(reps_f), len(reps_e)), dtype=np.int64)
        if k == 0:
            return out
        reps = np.array([self.classes[c][0] for c in self.pivots], dtype=np.int64)
        ge = np.asarray(reps_e, dtype=np.int64)
        rows = np.arange(k)[:, None]
        for i, g in enumerate(reps_f):
            left = mul[self.inverse[g], reps]              # g^-1 c_j
            cls = self.class_of[mul[left[:, None], ge[None, :]]]   # [g^-1 c_j h]
            if (cls < 0).any():
                raise AssertionError("group action leaves X")
            scaled = self.basis[rows, cls].sum(axis=0)
            if np.any(scaled % self.denominator):
                raise ArithmeticError("non-integral trace on U-flat")
            out[i] = scaled // self.denominator
        return out

    @property
    def traces(self) -> np.ndarray:
        """Trace of every ``(g, h)``, shape ``|G_f| x |G_e|``."""
        (_, _, of_f), (_, _, of_e) = self.conjugacy
        return self.class_traces[np.ix_(of_f, of_e)]


def _conjugacy_classes(M: FiniteMonoid, group: tuple[int, ...], inverse: dict[int, int]):
    G = np.asarray(group, dtype=np.int64)
    inv = np.array([inverse[g] for g in group], dtype=np.int64)
    conj = M.mul[M.mul[G[:, None], G[None, :]], inv[:, None]]    # conj[k, i] = k g_i k^-1
    pos = np.full(M.order, -1, dtype=np.int64)
    pos[G] = np.arange(G.size)
    lead = pos[conj].min(axis=0)                 # least index in the class of g_i
    leaders, of, sizes = np.unique(lead, return_inverse=True, return_counts=True)
    return G[leaders].tolist(), sizes, of


def _bottom(M: FiniteMonoid, green: GreenData, e: int, f: int) -> set[int]:
    """``f I(f) I(e) e``."""
    mul = M.mul
    I_e, I_f = green.ideal(e), green.ideal(f)
    if not (I_e.size and I_f.size):
        return set()
    prods = np.unique(mul[np.ix_(I_f, I_e)])
    return set(np.unique(mul[f][mul[prods, e]]).tolist())


def _right_actions(M: FiniteMonoid, green: GreenData, e: int) -> dict[tuple, list[int]]:
    """Elements of ``L_e`` grouped by the partial map they induce on the right of ``R_e``."""
    R_e = np.asarray(green.r_class(e))
    in_Re = np.zeros(M.order, dtype=bool)
    in_Re[R_e] = True
    acts: dict[tuple, list[int]] = {}
    for x in green.l_class(e):
        img = M.mul[R_e, x]
        acts.setdefault(tuple(np.where(in_Re[img], img, -1).tolist()), []).append(x)
    return acts


def equivalence_classes(M: FiniteMonoid, green: GreenData, e: int, f: int,
                        seed=()) -> list[tuple[int, ...]]:
    """Classes of the least equivalence on ``fMe`` generated by the two rules.

    Rule 1 identifies all of ``f I(f) I(e) e``; rule 2 identifies ``z x``
    and ``z y`` for ``z`` in ``f I(f)`` and ``x, y`` in ``L_e`` inducing
    the same partial map on ``R_e``.  ``seed`` is an optional partition of
    ``fMe`` to start from.
    """
    mul = M.mul
    fMe = np.unique(mul[f][mul[:, e]])
    fMe_set = set(fMe.tolist())
    I_f = green.ideal(f)
    fI_f = np.unique(mul[f, I_f]) if I_f.size else np.zeros(0, dtype=np.int64)
    bottom = sorted(_bottom(M, green, e, f))
    same_action = [g for g in _right_actions(M, green, e).values() if len(g) > 1]

    uf = _UnionFind(fMe.tolist())
    for cls in seed:
        cls = list(cls)
        for y in cls[1:]:
            uf.union(cls[0], y)
    changed = True
    while changed:                     # a second pass is a no-op; kept as a guard
        changed = False
        for y in bottom[1:]:
            changed |= uf.union(bottom[0], y)
        if not fI_f.size:
            continue
        for grp in same_action:
            for row in mul[np.ix_(fI_f, grp)].tolist():
                for y in row[1:]:
                    if row[0] not in fMe_set or y not in fMe_set:
                        raise AssertionError("z x falls outside fMe")
                    changed |= uf.union(row[0], y)
    buckets: dict[int, list[int]] = {}
    for x in fMe.tolist():
        buckets.setdefault(uf.find(x), []).append(x)
    return sorted(tuple(c) for c in buckets.values())


def u_flat(M: FiniteMonoid, green: GreenData, e: int, f: int) -> UFlatInstance:
    mul = M.mul
    n = M.order
    bottom = _bottom(M, green, e, f)
    L_e = set(green.l_class(e))
    acts = _right_actions(M, green, e)
    fMe_set = set(np.unique(mul[f][mul[:, e]]).tolist())
    all_classes = equivalence_classes(M, green, e, f)

    classes = tuple(c for c in all_classes if not bottom.intersection(c))
    class_of = np.full(n, -1, dtype=np.int64)
    for k, c in enumerate(classes):
        class_of[list(c)] = k

    vectors: list[dict[int, int]] = []
    for grp in acts.values():
        members = [x for x in grp if x in fMe_set]
        for x in members[1:]:
            v: dict[int, int] = {}
            for y, s in ((x, 1), (members[0], -1)):
                c = int(class_of[y])
                if c >= 0:
                    v[c] = v.get(c, 0) + s
            v = {c: s for c, s in v.items() if s}
            if v:
                vectors.append(v)
    fM = set(np.unique(mul[f]).tolist())
    lt_e = set(green.l_tilde_class(e))
    for z in sorted((fM & lt_e) - L_e):
        if class_of[z] >= 0:
            vectors.append({int(class_of[z]): 1})
    uniq = {tuple(sorted(v.items())) for v in vectors}
    vectors = [dict(t) for t in sorted(uniq)]

    rows, pivots = rref_basis(vectors)
    basis, D = integer_scaled(rows, len(classes))
    group_f, inv_f = _units_of_corner(M, f)
    group_e, inv_e = _units_of_corner(M, e)
    inst = UFlatInstance(M, e, f, classes, class_of, tuple(vectors), group_f, group_e,
                         {**inv_f, **inv_e}, basis, tuple(pivots), D)
    _check_action(inst)
    return inst


def _check_action(u: UFlatInstance) -> None:
    """The action on X is well defined and U-flat is invariant (tested on generators)."""
    mul = u.monoid.mul
    gens = [(g, u.e) for g in _generators(u.monoid, u.group_f, u.f)]
    gens += [(u.f, h) for h in _generators(u.monoid, u.group_e, u.e)]
    for g, h in gens:
        hinv = u.inverse[h]
        for k, cls in enumerate(u.classes):
            images = set(u.class_of[mul[mul[g, list(cls)], hinv]].tolist())
            if len(images) != 1 or -1 in images:
                raise AssertionError(f"class {k} is not mapped to a single class of X")
        perm = u.permutation(g, h)
        inv_perm = np.empty_like(perm)
        inv_perm[perm] = np.arange(perm.size)
        if not rows_in_span(u.basis, list(u.pivots), u.denominator, u.basis[:, inv_perm]):
            raise AssertionError("U-flat is not invariant under the group action")


# ------------------------------------------------------------------ characters


@dataclass(frozen=True, eq=False)
class GroupIrreducible:
    label: tuple                      # (orbit_id, rho_index); () for the trivial group
    dim: int
    elements: tuple[int, ...] = field(repr=False)
    values: np.ndarray = field(repr=False)


def trivial_group_irreducible(element: int) -> GroupIrreducible:
    return GroupIrreducible((), 1, (element,), np.ones(1, dtype=complex))


def group_irreducibles(R: FiniteRing) -> list[GroupIrreducible]:
    """Irreducible characters of ``U(Aff(R)) = R x| U(R)``, R local.

    Each is induced from ``chi (x) rho`` on ``R x| St(chi)``; at
    ``a x + b`` its value is ``rho(a) * sum over chi' in O of chi'(b)``
    when ``a`` lies in the stabilizer and 0 otherwise.  Elements are
    indexed as in :func:`build_aff`.
    """
    n = R.order
    units = R.units
    elements = tuple(a * n + b for a in units for b in range(n))
    a_of = np.repeat(np.asarray(units), n)
    b_of = np.tile(np.arange(n), len(units))
    out = []
    for o in orbits(R):
        member_vals = np.array([c.values for c in o.members], dtype=float)
        moduli = np.array([[c.modulus] for c in o.members], dtype=float)
        sums = np.exp(2j * np.pi * member_vals / moduli).sum(axis=0)   # indexed by b
        stab = list(o.stabilizer.elements)
        for j, rho in enumerate(o.stabilizer_characters):
            rho_at = np.zeros(n, dtype=complex)
            rho_at[stab] = rho.complex_values()
            in_stab = np.zeros(n, dtype=bool)
            in_stab[stab] = True
            vals = np.where(in_stab[a_of], rho_at[a_of] * sums[b_of], 0)
            out.append(GroupIrreducible((o.orbit_id, j), o.size, elements, vals))
    return out


def arrow_matrix(u: UFlatInstance, targets: list[GroupIrreducible],
                 sources: list[GroupIrreducible], report: dict | None = None) -> np.ndarray:
    """``out[w, v]`` = multiplicity of ``W (x) D(V)`` in U-flat."""
    for irr in targets:
        assert irr.elements == u.group_f
    for irr in sources:
        assert irr.elements == u.group_e
    (reps_f, sizes_f, _), (reps_e, sizes_e, _) = u.conjugacy
    col_f = [u.group_f.index(g) for g in reps_f]
    col_e = [u.group_e.index(h) for h in reps_e]
    XW = np.array([w.values for w in targets])[:, col_f] * sizes_f
    XV = np.array([v.values for v in sources])[:, col_e] * sizes_e
    T = u.class_traces.astype(float)
    raw = (XW.conj() @ T @ XV.T) / (len(u.group_f) * len(u.group_e))
    counts = np.rint(raw.real).astype(np.int64)
    resid = np.abs(raw - counts).max(initial=0.0)
    if report is not None:
        report["max_residual"] = max(report.get("max_residual", 0.0), float(resid))
        report["traces_checked"] = report.get("traces_checked", 0) + T.size
    if resid > INTEGRALITY_TOL or (counts < 0).any():
        raise ArithmeticError(f"non-integral multiplicity (residual {resid:.3g})")
    return counts


def arrow_count(u: UFlatInstance, W: GroupIrreducible, V: GroupIrreducible) -> int:
    return int(arrow_matrix(u, [W], [V])[0, 0])


def oracle_quiver(R: FiniteRing, report: dict | None = None) -> Quiver:
    """Quiver of C Aff(R) computed on the monoid itself (R local)."""
    if not is_local(R):
        raise NotLocalError(f"{R} is not a local ring")
    if R.order ** 2 > ORACLE_LIMIT:
        raise OracleSizeError(f"Aff({R}) has {R.order ** 2} elements; oracle limit is {ORACLE_LIMIT}")
    M = build_aff(R)
    if not check_r_trivial_idempotent_submonoid(M):
        raise HypothesisError(f"idempotents of Aff({R}) do not generate an R-trivial monoid")
    green = green_data(M)
    n = R.order
    const0 = R.zero * n + R.zero
    ident = M.identity
    reps = sorted(green.j_of[[const0, ident]].tolist())
    if sorted(green.j_classes.index(c) for c in green.regular_j) != reps:
        raise AssertionError("regular J-classes are not those of 0 and the identity")

    irreps = {const0: [trivial_group_irreducible(const0)], ident: group_irreducibles(R)}

    def vertex(idem: int, irr: GroupIrreducible) -> VertexLabel:
        if idem == const0:
            return VertexLabel.trivial()
        return VertexLabel.simple(irr.label[0], irr.label[1], irr.dim)

    verts = [vertex(x, irr) for x in (const0, ident) for irr in irreps[x]]
    arrows = {}
    for e in (const0, ident):
        for f in (const0, ident):
            u = u_flat(M, green, e, f)
            counts = arrow_matrix(u, irreps[f], irreps[e], report)
            for w, W in enumerate(irreps[f]):
                for v, V in enumerate(irreps[e]):
                    if counts[w, v]:
                        arrows[vertex(e, V), vertex(f, W)] = int(counts[w, v])
    return Quiver.build(verts, arrows)
