"""Finite commutative unital rings given by explicit operation tables.

Every ring carries a fixed enumeration of its elements as indices
``0 .. order-1`` together with addition and multiplication tables over
those indices.  Four constructions are supported: residues ``Z/n``,
Galois fields ``GF(p^k)``, finite products, and rings read from a JSON
table file.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class RingError(ValueError):
    """Base class for ring construction failures."""


class RingSpecError(RingError):
    """Malformed ring expression or table file."""


class RingAxiomError(RingError):
    def __init__(self, axiom: str, witnesses: tuple):
        self.axiom = axiom
        self.witnesses = witnesses
        super().__init__(f"ring axiom violated: {axiom} at {witnesses}")


class ReducibleModulusError(RingError):
    pass


class NotLocalError(RingError):
    pass


def _freeze(arr) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative ring with identity, stored as operation tables.

    ``kind`` is one of ``"modular"``, ``"galois"``, ``"product"``, ``"table"``
    and ``params`` holds the construction data (``n``; ``(p, k, modulus)``;
    the factor rings; or the source path).
    """

    kind: str
    params: tuple
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    zero: int = 0
    one: int = 1
    name: str = ""

    @property
    def order(self) -> int:
        return self.add_table.shape[0]

    @property
    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    @property
    def neg_table(self) -> np.ndarray:
        # -a is the unique b with a + b = 0
        return np.argmax(self.add_table == self.zero, axis=1)

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    @property
    def units(self) -> tuple[int, ...]:
        return tuple(int(a) for a in np.flatnonzero((self.mul_table == self.one).any(axis=1)))

    def inverse(self, u: int) -> int:
        hits = np.flatnonzero(self.mul_table[u] == self.one)
        if hits.size == 0:
            raise ValueError(f"{self.element_name(u)} is not a unit of {self}")
        return int(hits[0])

    def element_name(self, a: int) -> str:
        if self.kind == "modular":
            return str(a)
        if self.kind == "galois":
            p, k, _ = self.params
            digits = _digits(a, p, k)
            terms = []
            for deg in range(k - 1, -1, -1):
                c = digits[deg]
                if c == 0:
                    continue
                mono = "" if deg == 0 else ("x" if deg == 1 else f"x^{deg}")
                coeff = str(c) if (c != 1 or deg == 0) else ""
                terms.append(coeff + mono)
            return "+".join(terms) if terms else "0"
        if self.kind == "product":
            parts = _unrank(a, [f.order for f in self.params])
            return "(" + ",".join(f.element_name(x) for f, x in zip(self.params, parts)) + ")"
        return f"e{a}"

    def __str__(self) -> str:
        return self.name or f"<{self.kind} ring of order {self.order}>"

    __repr__ = __str__


# ---------------------------------------------------------------- builders


def modular(n: int) -> FiniteRing:
    if n < 2:
        raise RingSpecError(f"Z/{n}: the zero ring and Z/0 are not supported (need n >= 2)")
    r = np.arange(n)
    return FiniteRing(
        "modular", (n,),
        _freeze((r[:, None] + r[None, :]) % n),
        _freeze((r[:, None] * r[None, :]) % n),
        0, 1 % n, f"Z/{n}",
    )


def _digits(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        a, d = divmod(a, p)
        out.append(d)
    return out


def _unrank(a: int, radices: Sequence[int]) -> list[int]:
    """Mixed-radix digits of ``a``, first radix most significant."""
    out = []
    for r in reversed(radices):
        a, d = divmod(a, r)
        out.append(d)
    return out[::-1]


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q = p**k`` or raise."""
    if q < 2:
        raise RingSpecError(f"GF({q}): not a prime power")
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise RingSpecError(f"GF argument is not a prime power")
            return p, k
    return q, 1


def _poly_mod(coeffs: list[int], modulus: Sequence[int], p: int) -> list[int]:
    """Remainder of ``coeffs`` (low degree first) by a monic ``modulus``."""
    coeffs = [c % p for c in coeffs]
    k = len(modulus) - 1
    for deg in range(len(coeffs) - 1, k - 1, -1):
        c = coeffs[deg]
        if c:
            for i in range(k + 1):
                coeffs[deg - k + i] = (coeffs[deg - k + i] - c * modulus[i]) % p
    return (coeffs + [0] * k)[:k]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(list(modulus), divisor, p)):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``k`` over F_p."""
    for tail in itertools.product(range(p), repeat=k):
        cand = tail[::-1] + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def galois(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FiniteRing:
    """GF(p^k) as F_p[x]/(modulus).

    ``modulus`` lists coefficients from the constant term up and must be
    monic of degree ``k``.  Element ``a`` has base-``p`` digits equal to
    its polynomial coefficients, constant term least significant.
    """
    if modulus is None:
        modulus = default_modulus(p, k) if k > 1 else (0, 1)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise RingSpecError(f"modulus {modulus} is not monic of degree {k}")
    if not is_irreducible(modulus, p):
        raise ReducibleModulusError(f"modulus {modulus} is reducible over F_{p}")
    q = p ** k
    digits = np.array([_digits(a, p, k) for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(k)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    prod = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
    prod %= p
    for deg in range(2 * k - 2, k - 1, -1):
        c = prod[:, :, deg].copy()
        for i in range(k + 1):
            prod[:, :, deg - k + i] = (prod[:, :, deg - k + i] - c * modulus[i]) % p
    mul = prod[:, :, :k] @ weights
    name = f"GF({q})"
    return FiniteRing("galois", (p, k, modulus), _freeze(add), _freeze(mul), 0, 1, name)


def product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Direct product with mixed-radix element indices (first factor most significant)."""
    factors = tuple(factors)
    if not factors:
        raise RingSpecError("empty product")
    if len(factors) == 1:
        return factors[0]
    add = np.zeros((1, 1), dtype=np.int64)
    mul = np.zeros((1, 1), dtype=np.int64)
    zero = one = 0
    for f in factors:
        n = f.order
        add = (add * n)[:, None, :, None] + f.add_table[None, :, None, :]
        mul = (mul * n)[:, None, :, None] + f.mul_table[None, :, None, :]
        m = add.shape[0] * add.shape[1]
        add = add.reshape(m, m)
        mul = mul.reshape(m, m)
        zero = zero * n + f.zero
        one = one * n + f.one
    name = " x ".join(f.name for f in factors)
    return FiniteRing("product", factors, _freeze(add), _freeze(mul), zero, one, name)


def table_ring(order: int, add, mul, zero: int, one: int, name: str = "", source=None) -> FiniteRing:
    """Build and exhaustively validate a ring from explicit tables."""
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    if order < 1 or add.shape != (order, order) or mul.shape != (order, order):
        raise RingSpecError(f"tables must be {order}x{order}")
    for t in (add, mul):
        if t.min() < 0 or t.max() >= order:
            raise RingSpecError("table entries must lie in [0, order)")
    if not (0 <= zero < order and 0 <= one < order):
        raise RingSpecError("zero/one out of range")
    if order == 1 or zero == one:
        raise RingSpecError("the zero ring is not supported")
    ring = FiniteRing("table", (source,), _freeze(add), _freeze(mul), zero, one,
                      name or f"table[{order}]")
    check_axioms(ring)
    return ring


def as_table_ring(R: FiniteRing) -> FiniteRing:
    """Forget the construction of ``R`` and keep only its tables."""
    return table_ring(R.order, R.add_table, R.mul_table, R.zero, R.one, name=f"table({R.name})")


def load_table(path: str | Path) -> FiniteRing:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise RingSpecError(f"cannot read table file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise RingSpecError("table file must hold a JSON object")
    missing = {"order", "zero", "one", "add", "mul"} - set(doc)
    if missing:
        raise RingSpecError(f"table file lacks fields {sorted(missing)}")
    try:
        return table_ring(int(doc["order"]), doc["add"], doc["mul"], int(doc["zero"]),
                          int(doc["one"]), name=f"table:{path.name}", source=str(path))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, RingError):
            raise
        raise RingSpecError(f"bad table file {path}: {exc}") from exc


def dump_table(R: FiniteRing) -> str:
    return json.dumps({
        "order": R.order, "zero": R.zero, "one": R.one,
        "add": R.add_table.tolist(), "mul": R.mul_table.tolist(),
    })


def make_ring(spec: str) -> FiniteRing:
    """Parse ``atom (" x " atom)*`` with atoms ``Z/n``, ``GF(q)``, ``table:path``."""
    if not isinstance(spec, str) or not spec.strip():
        raise RingSpecError("empty ring expression")
    atoms = [a.strip() for a in spec.strip().split(" x ")]
    rings = [_parse_atom(a) for a in atoms]
    return product(rings) if len(rings) > 1 else rings[0]


def _parse_atom(atom: str) -> FiniteRing:
    if atom.startswith("Z/"):
        body = atom[2:]
        if not body.isdigit():
            raise RingSpecError(f"bad modulus in {atom!r}")
        return modular(int(body))
    if atom.startswith("GF(") and atom.endswith(")"):
        body = atom[3:-1]
        if not body.isdigit():
            raise RingSpecError(f"bad field size in {atom!r}")
        p, k = prime_power(int(body))
        return galois(p, k)
    if atom.startswith("table:") and len(atom) > 6:
        return load_table(atom[6:])
    raise RingSpecError(f"cannot parse ring atom {atom!r}")


# ---------------------------------------------------------------- axioms


def check_axioms(R: FiniteRing, block: int = 32) -> None:
    """Exhaustive ring-axiom check; raises :class:`RingAxiomError` on the first failure."""
    n = R.order
    add, mul = R.add_table, R.mul_table
    idx = np.arange(n)

    def fail(name, mask, *arrays):
        hit = np.argwhere(mask)[0]
        raise RingAxiomError(name, tuple(int(x) for x in hit))

    for name, t in (("additive commutativity", add), ("multiplicative commutativity", mul)):
        if not (t == t.T).all():
            fail(name, t != t.T)
    if not (add[R.zero] == idx).all():
        fail("additive identity", (add[R.zero] != idx)[None, :])
    if not (mul[R.one] == idx).all():
        fail("multiplicative identity", (mul[R.one] != idx)[None, :])
    if not (add == R.zero).any(axis=1).all():
        fail("additive inverses", ~(add == R.zero).any(axis=1)[:, None])
    for start in range(0, n, block):
        a = idx[start:start + block]
        for name, t in (("additive associativity", add), ("multiplicative associativity", mul)):
            lhs = t[t[a]]                     # (ab)c
            rhs = t[a[:, None, None], t[None, :, :]]  # a(bc)
            bad = lhs != rhs
            if bad.any():
                hit = np.argwhere(bad)[0]
                raise RingAxiomError(name, (int(a[hit[0]]), int(hit[1]), int(hit[2])))
        lhs = mul[a[:, None, None], add[None, :, :]]
        rhs = add[mul[a][:, :, None], mul[a][:, None, :]]
        bad = lhs != rhs
        if bad.any():
            hit = np.argwhere(bad)[0]
            raise RingAxiomError("distributivity", (int(a[hit[0]]), int(hit[1]), int(hit[2])))


# ---------------------------------------------------------------- local structure


def idempotents(R: FiniteRing) -> list[int]:
    return [int(e) for e in np.flatnonzero(np.diagonal(R.mul_table) == np.arange(R.order))]


def is_local(R: FiniteRing) -> bool:
    """Non-units of a finite commutative ring form an ideal iff the ring is local."""
    unit_mask = (R.mul_table == R.one).any(axis=1)
    nonunits = np.flatnonzero(~unit_mask)
    return not unit_mask[R.add_table[np.ix_(nonunits, nonunits)]].any()


def is_field(R: FiniteRing) -> bool:
    _require_local(R)
    return len(R.units) == R.order - 1


def _require_local(R: FiniteRing) -> None:
    if not is_local(R):
        raise NotLocalError(f"{R} is not a local ring")


@dataclass(frozen=True)
class LocalFactor:
    """A local factor of a ring with the projection ``R -> factor`` as an index map."""

    ring: FiniteRing
    projection: np.ndarray = field(repr=False, compare=False)


def local_decomposition(R: FiniteRing) -> list[LocalFactor]:
    if R.kind == "modular":
        n = R.params[0]
        out = []
        for p, k in _factorize(n):
            q = p ** k
            out.append(LocalFactor(modular(q), _freeze(np.arange(n) % q)))
        return out
    if R.kind == "galois":
        return [LocalFactor(R, _freeze(np.arange(R.order)))]
    if R.kind == "product":
        factors = R.params
        coords = np.array([_unrank(a, [f.order for f in factors]) for a in range(R.order)],
                          dtype=np.int64)
        out = []
        for i, f in enumerate(factors):
            for sub in local_decomposition(f):
                out.append(LocalFactor(sub.ring, _freeze(sub.projection[coords[:, i]])))
        return out
    return peirce_decomposition(R)


def peirce_decomposition(R: FiniteRing) -> list[LocalFactor]:
    """Split ``R`` along its primitive idempotents by exhaustive scan."""
    ids = [e for e in idempotents(R) if e != R.zero]
    primitive = [
        e for e in ids
        if not any(f != e and R.mul_table[e, f] == f for f in ids)
    ]
    out = []
    for e in primitive:
        image = np.unique(R.mul_table[e])
        remap = np.full(R.order, -1, dtype=np.int64)
        remap[image] = np.arange(image.size)
        add = remap[R.add_table[np.ix_(image, image)]]
        mul = remap[R.mul_table[np.ix_(image, image)]]
        sub = table_ring(image.size, add, mul, int(remap[R.zero]), int(remap[e]),
                         name=f"{R.name}*e{e}")
        out.append(LocalFactor(sub, _freeze(remap[R.mul_table[e]])))
    return out


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class LocalData:
    """Invariants of a local ring consumed by the quiver formulas."""

    maximal_ideal: frozenset[int]
    units: tuple[int, ...]
    m_squared: frozenset[int]
    associate_reps: tuple[int, ...]
    associate_classes: tuple[frozenset[int], ...]
    annihilators: tuple[frozenset[int], ...]

    @property
    def r(self) -> int:
        return len(self.associate_reps)


def additive_closure(R: FiniteRing, generators) -> frozenset[int]:
    """Smallest additive subgroup containing ``generators``."""
    seen = {R.zero}
    frontier = [R.zero]
    gens = sorted(set(generators))
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(R.add_table[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(seen)


def local_data(R: FiniteRing, rng: random.Random | None = None) -> LocalData:
    """Maximal ideal, its square, associate classes of m \\ m^2 and their annihilators.

    The representative of each associate class is its least element
    index, or a random member when ``rng`` is given.
    """
    _require_local(R)
    units = R.units
    unit_set = set(units)
    m = frozenset(a for a in R.elements if a not in unit_set)
    m_list = sorted(m)
    m2 = additive_closure(R, np.unique(R.mul_table[np.ix_(m_list, m_list)]).tolist())
    rest = sorted(m - m2)
    classes = []
    seen: set[int] = set()
    for a in rest:
        if a in seen:
            continue
        cls = frozenset(int(x) for x in R.mul_table[list(units), a])
        seen |= cls
        classes.append(cls)
    reps = tuple(rng.choice(sorted(c)) if rng else min(c) for c in classes)
    anns = tuple(frozenset(int(x) for x in np.flatnonzero(R.mul_table[p] == R.zero)) for p in reps)
    return LocalData(m, units, m2, reps, tuple(classes), anns)


def is_principal_ideal(R: FiniteRing, ideal) -> bool:
    ideal = frozenset(ideal)
    return any(frozenset(R.mul_table[p].tolist()) == ideal for p in ideal)


def is_chain_ring(R: FiniteRing) -> bool:
    """Local ring whose maximal ideal is principal (then so is every power of it)."""
    return is_principal_ideal(R, local_data(R).maximal_ideal)
