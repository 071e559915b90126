"""Quivers with labelled, dimensioned vertices and arrow multiplicities."""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True)
class VertexLabel:
    """A simple module: the trivial one, ``W(O<orbit>, r<rho>)``, or a tuple of those."""

    kind: str                       # "trivial" | "simple" | "tuple"
    dim: int = 1
    orbit: int = -1
    rho: int = -1
    parts: tuple["VertexLabel", ...] = ()

    @classmethod
    def trivial(cls) -> "VertexLabel":
        return cls("trivial", 1)

    @classmethod
    def simple(cls, orbit: int, rho: int, dim: int) -> "VertexLabel":
        return cls("simple", dim, orbit, rho)

    @classmethod
    def tuple_of(cls, parts: Iterable["VertexLabel"]) -> "VertexLabel":
        flat: list[VertexLabel] = []
        for p in parts:
            flat.extend(p.parts if p.kind == "tuple" else (p,))
        dim = 1
        for p in flat:
            dim *= p.dim
        return cls("tuple", dim, parts=tuple(flat))

    @property
    def is_trivial(self) -> bool:
        if self.kind == "tuple":
            return all(p.is_trivial for p in self.parts)
        return self.kind == "trivial"

    @property
    def key(self) -> tuple:
        if self.kind == "trivial":
            return (0,)
        if self.kind == "simple":
            return (1, self.orbit, self.rho)
        return (2,) + tuple(p.key for p in self.parts)

    def __str__(self) -> str:
        if self.kind == "trivial":
            return "C"
        if self.kind == "simple":
            return f"W(O{self.orbit},r{self.rho})"
        return "(" + ",".join(str(p) for p in self.parts) + ")"


_SIMPLE = re.compile(r"W\(O(\d+),r(\d+)\)")


def parse_label(text: str, dim: int) -> VertexLabel:
    """Inverse of ``str(label)``; ``dim`` is the dimension of the whole label.

    Component dimensions of tuple labels are not recoverable from the text
    and are stored as 0.
    """
    def atom(s: str, d: int) -> VertexLabel:
        if s == "C":
            return VertexLabel.trivial()
        m = _SIMPLE.fullmatch(s)
        if not m:
            raise ValueError(f"bad vertex label {s!r}")
        return VertexLabel.simple(int(m[1]), int(m[2]), d)

    if text.startswith("("):
        if not text.endswith(")"):
            raise ValueError(f"bad vertex label {text!r}")
        pieces = re.findall(r"C|W\(O\d+,r\d+\)", text[1:-1])
        if ",".join(pieces) != text[1:-1]:
            raise ValueError(f"bad vertex label {text!r}")
        return VertexLabel("tuple", dim, parts=tuple(atom(p, 0) for p in pieces))
    return atom(text, dim)


@dataclass(frozen=True, eq=False)
class Quiver:
    vertices: tuple[VertexLabel, ...]
    arrows: Mapping[tuple[int, int], int]

    @classmethod
    def build(cls, vertices: Iterable[VertexLabel],
              arrows: Mapping[tuple[VertexLabel, VertexLabel], int] | Iterable = ()) -> "Quiver":
        """Canonically order ``vertices`` and attach arrows given by label pairs."""
        verts = tuple(sorted(set(vertices), key=lambda v: v.key))
        index = {v: i for i, v in enumerate(verts)}
        counts: Counter = Counter()
        items = arrows.items() if isinstance(arrows, Mapping) else ((a, 1) for a in arrows)
        for (s, t), m in items:
            if m:
                counts[index[s], index[t]] += m
        return cls(verts, dict(sorted(counts.items())))

    def __post_init__(self):
        n = len(self.vertices)
        for (s, t), m in self.arrows.items():
            if not (0 <= s < n and 0 <= t < n) or m < 1:
                raise ValueError(f"invalid arrow {(s, t)}: {m}")

    def __eq__(self, other) -> bool:
        # tuple component dimensions are not serialized, so compare label text
        return (isinstance(other, Quiver)
                and [(str(v), v.dim) for v in self.vertices] == [(str(v), v.dim) for v in other.vertices]
                and dict(self.arrows) == dict(other.arrows))

    @property
    def num_arrows(self) -> int:
        return sum(self.arrows.values())

    def index(self, label: VertexLabel) -> int:
        return self.vertices.index(label)

    def labelled_arrows(self) -> Counter:
        return Counter({(self.vertices[s], self.vertices[t]): m for (s, t), m in self.arrows.items()})

    def arrows_into(self, v: int) -> int:
        return sum(m for (s, t), m in self.arrows.items() if t == v)

    def arrows_out_of(self, v: int) -> int:
        return sum(m for (s, t), m in self.arrows.items() if s == v)

    def loops_at(self, v: int) -> int:
        return self.arrows.get((v, v), 0)

    def max_multiplicity(self) -> int:
        return max(self.arrows.values(), default=0)

    def has_path_of_length_two(self) -> bool:
        targets = {t for (_, t) in self.arrows}
        return any(s in targets for (s, _) in self.arrows)

    # ------------------------------------------------------------ output

    def to_json(self) -> str:
        doc = {
            "vertices": [{"id": i, "label": str(v), "dim": v.dim} for i, v in enumerate(self.vertices)],
            "arrows": [{"src": s, "dst": t, "mult": m} for (s, t), m in sorted(self.arrows.items())],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        doc = json.loads(text)
        verts = tuple(parse_label(v["label"], v["dim"]) for v in sorted(doc["vertices"], key=lambda v: v["id"]))
        return cls(verts, {(a["src"], a["dst"]): a["mult"] for a in doc["arrows"]})

    def to_dot(self) -> str:
        lines = ["digraph Q {"]
        for v in self.vertices:
            lines.append(f'  "{v}" [dim={v.dim}];')
        for (s, t), m in sorted(self.arrows.items()):
            for _ in range(m):
                lines.append(f'  "{self.vertices[s]}" -> "{self.vertices[t]}";')
        return "\n".join(lines) + "\n}\n"

    def to_text(self) -> str:
        lines = ["vertices:"]
        for i, v in enumerate(self.vertices):
            lines.append(f"  [{i}] {v}  dim={v.dim}")
        lines.append("arrows:")
        for (s, t), m in sorted(self.arrows.items()):
            suffix = f"  x{m}" if m > 1 else ""
            lines.append(f"  {self.vertices[s]} -> {self.vertices[t]}{suffix}")
        loops = sum(self.loops_at(i) for i in range(len(self.vertices)))
        lines.append(f"summary: {len(self.vertices)} vertices, {self.num_arrows} arrows (loops: {loops})")
        return "\n".join(lines) + "\n"


def tensor_quiver(qa: Quiver, qb: Quiver) -> Quiver:
    """Quiver of a tensor product of basic algebras from the factor quivers."""
    verts = {}
    for i, v in enumerate(qa.vertices):
        for j, w in enumerate(qb.vertices):
            verts[i, j] = VertexLabel.tuple_of((v, w))
    arrows: Counter = Counter()
    for (s, t), m in qa.arrows.items():
        for j in range(len(qb.vertices)):
            arrows[verts[s, j], verts[t, j]] += m
    for (s, t), m in qb.arrows.items():
        for i in range(len(qa.vertices)):
            arrows[verts[i, s], verts[i, t]] += m
    return Quiver.build(verts.values(), arrows)


def isomorphic(q1: Quiver, q2: Quiver, respect_dimensions: bool = True) -> bool:
    """Search for a vertex bijection preserving dimensions and all arrow multiplicities."""
    n = len(q1.vertices)
    if n != len(q2.vertices) or q1.num_arrows != q2.num_arrows:
        return False

    def signature(q: Quiver, v: int) -> tuple:
        dim = q.vertices[v].dim if respect_dimensions else 0
        outs = sorted(m for (s, t), m in q.arrows.items() if s == v and t != v)
        ins = sorted(m for (s, t), m in q.arrows.items() if t == v and s != v)
        return (dim, q.loops_at(v), tuple(outs), tuple(ins))

    sig1 = [signature(q1, v) for v in range(n)]
    sig2 = [signature(q2, v) for v in range(n)]
    if sorted(sig1) != sorted(sig2):
        return False
    a1 = dict(q1.arrows)
    a2 = dict(q2.arrows)
    # most constrained vertices first
    order = sorted(range(n), key=lambda v: sum(1 for u in range(n) if sig1[u] == sig1[v]))
    image = [-1] * n
    used = [False] * n

    def consistent(v: int, w: int) -> bool:
        for u in range(n):
            x = image[u]
            if x < 0:
                continue
            if a1.get((v, u), 0) != a2.get((w, x), 0) or a1.get((u, v), 0) != a2.get((x, w), 0):
                return False
        return True

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if used[w] or sig2[w] != sig1[v]:
                continue
            image[v] = w
            if consistent(v, w):
                used[w] = True
                if extend(k + 1):
                    return True
                used[w] = False
            image[v] = -1
        return False

    return extend(0)
