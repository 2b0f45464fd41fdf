"""Truncated path algebras with preprojective relations and their corners.

Paths are stored as ``(start, arrows)`` with ``arrows`` a tuple of arrow ids in
traversal order; the idempotent at v is ``(v, ())``. Multiplication follows
the algebra convention: ``p * q`` means "first q, then p".

Each graded piece ``(s, t, d)`` is the span of paths of length d from s to t
modulo the degree-d part of the relation ideal. The ideal is built degree by
degree as ``I_d = sum_a a * I_{d-1} + sum_v rho_v * paths_{d-2}`` and kept in
echelon form with the smallest path of each row as pivot. Basis paths are the
non-pivot paths.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import QQ
from .mckay import INF, McKayData, Quiver, frame, mckay_quiver, star_quiver
from .rep import CorneredModule, closure

DEFAULT_CAP = 8
MAX_PATHS = 10**6
KINDS = ("Pi", "A", "B", "B_I", "A_I")


class CapTooLargeForMemory(MemoryError):
    pass


class NotCyclic(ValueError):
    pass


Path = tuple  # (start, arrows)


def _end(quiver: Quiver, path: Path) -> int:
    start, arrows = path
    return quiver.arrows[arrows[-1]].head if arrows else start


def _relations(quiver: Quiver, vertices) -> dict[int, dict[Path, Fraction]]:
    """rho_v = sum over arrows a with head v of eps(a) * (a* then a), partners present."""
    out = {}
    for v in vertices:
        rho: dict[Path, Fraction] = defaultdict(Fraction)
        for a in quiver.in_arrows(v):
            if a.partner is None:
                continue
            star = quiver.arrows[a.partner]
            rho[(star.tail, (star.id, a.id))] += a.eps
        rho = {p: c for p, c in rho.items() if c}
        if rho:
            out[v] = rho
    return out


class _Echelon:
    """Rows of a subspace of formal path combinations, pivot = smallest path."""

    def __init__(self):
        self.rows: dict[Path, dict[Path, Fraction]] = {}

    def reduce(self, vec: Mapping) -> dict:
        vec = {p: Fraction(c) for p, c in vec.items() if c}
        while True:
            hits = [p for p in vec if p in self.rows]
            if not hits:
                return vec
            piv = min(hits, key=_path_key)
            coef = vec[piv]
            for p, c in self.rows[piv].items():
                val = vec.get(p, 0) - coef * c
                if val:
                    vec[p] = val
                else:
                    vec.pop(p, None)

    def add(self, vec: Mapping) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        piv = min(vec, key=_path_key)
        inv = 1 / vec[piv]
        self.rows[piv] = {p: c * inv for p, c in vec.items()}
        return True

    def __len__(self):
        return len(self.rows)


def _path_key(path: Path):
    return (len(path[1]), path[1], path[0])


@dataclass(eq=False)
class TruncatedAlgebra:
    kind: str
    quiver: Quiver
    corner: tuple[int, ...]
    cap: int
    basis: dict = field(default_factory=dict)
    ideal: dict = field(default_factory=dict)

    def piece(self, s: int, t: int, d: int) -> list[Path]:
        return self.basis.get((s, t, d), [])

    def dims_by_degree(self) -> list[int]:
        out = [0] * (self.cap + 1)
        for (s, t, d), paths in self.basis.items():
            if s in self.corner and t in self.corner:
                out[d] += len(paths)
        return out

    def dim_upto(self, d: int) -> int:
        return sum(self.dims_by_degree()[: d + 1])

    def corner_dim_upto(self, sources, targets, d: int) -> int:
        return sum(
            len(paths)
            for (s, t, deg), paths in self.basis.items()
            if s in sources and t in targets and deg <= d
        )

    def basis_elements(self) -> list[Path]:
        return [
            p
            for (s, t, d), paths in sorted(self.basis.items())
            if s in self.corner and t in self.corner
            for p in paths
        ]

    def idempotent(self, v: int) -> dict:
        return {(v, ()): Fraction(1)}

    def unit(self) -> dict:
        return {(v, ()): Fraction(1) for v in self.corner}

    def normal_form(self, vec: Mapping) -> dict:
        """Coordinates in the basis; paths beyond the cap are dropped."""
        grouped: dict[tuple, dict] = defaultdict(dict)
        for p, c in vec.items():
            if c and len(p[1]) <= self.cap:
                key = (p[0], _end(self.quiver, p), len(p[1]))
                grouped[key][p] = grouped[key].get(p, 0) + Fraction(c)
        out = {}
        for key, part in grouped.items():
            ech = self.ideal.get(key)
            red = ech.reduce(part) if ech is not None else {p: c for p, c in part.items() if c}
            out.update(red)
        return out

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        """x * y: follow a path of y, then a path of x."""
        prod: dict[Path, Fraction] = defaultdict(Fraction)
        for q, cq in y.items():
            end_q = _end(self.quiver, q)
            for p, cp in x.items():
                if p[0] != end_q or len(p[1]) + len(q[1]) > self.cap:
                    continue
                prod[(q[0], q[1] + p[1])] += cp * cq
        return self.normal_form(prod)

    def add(self, x: Mapping, y: Mapping, scale=1) -> dict:
        out = dict(x)
        for p, c in y.items():
            val = out.get(p, 0) + scale * c
            if val:
                out[p] = val
            else:
                out.pop(p, None)
        return out

    def degree_table(self) -> list[dict]:
        rows = []
        for d in range(self.cap + 1):
            rows.append({"degree": d, "dim": self.dims_by_degree()[d], "cumulative": self.dim_upto(d)})
        return rows


def _count_paths(quiver: Quiver, cap: int) -> int:
    counts = {v: 1 for v in quiver.vertices}
    total = len(counts)
    for _ in range(cap):
        nxt = defaultdict(int)
        for a in quiver.arrows:
            nxt[a.head] += counts.get(a.tail, 0)
        counts = nxt
        total += sum(counts.values())
        if total > MAX_PATHS:
            break
    return total


def build_truncated(quiver: Quiver, relation_vertices, cap: int, kind: str = "custom", corner=None) -> TruncatedAlgebra:
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    if _count_paths(quiver, cap) > MAX_PATHS:
        raise CapTooLargeForMemory(f"more than {MAX_PATHS} paths up to degree {cap}")
    rels = _relations(quiver, relation_vertices)
    paths_by_degree: list[dict] = []
    layer = defaultdict(list)
    for v in quiver.vertices:
        layer[(v, v)].append((v, ()))
    paths_by_degree.append(layer)
    for d in range(1, cap + 1):
        layer = defaultdict(list)
        for (s, t), paths in paths_by_degree[-1].items():
            for a in quiver.out_arrows(t):
                for p in paths:
                    layer[(s, a.head)].append((s, p[1] + (a.id,)))
        paths_by_degree.append(layer)
    ideal: dict[tuple, _Echelon] = {}
    for d in range(2, cap + 1):
        current: dict[tuple, _Echelon] = defaultdict(_Echelon)
        # a * I_{d-1}
        for (s, t, deg), ech in ideal.items():
            if deg != d - 1:
                continue
            for a in quiver.out_arrows(t):
                for row in ech.rows.values():
                    current[(s, a.head, d)].add({(p[0], p[1] + (a.id,)): c for p, c in row.items()})
        # rho_v * (paths of length d-2 ending at v)
        for (s, v), paths in paths_by_degree[d - 2].items():
            if v not in rels:
                continue
            for q in paths:
                current[(s, v, d)].add({(s, q[1] + r[1]): c for r, c in rels[v].items()})
        for key, ech in current.items():
            if len(ech):
                ideal[key] = ech
    basis = {}
    for d, layer in enumerate(paths_by_degree):
        for (s, t), paths in layer.items():
            ech = ideal.get((s, t, d))
            kept = sorted((p for p in paths if ech is None or p not in ech.rows), key=_path_key)
            if kept:
                basis[(s, t, d)] = kept
    corner = tuple(corner) if corner is not None else tuple(quiver.vertices)
    return TruncatedAlgebra(kind, quiver, corner, cap, basis, ideal)


def truncated_basis(kind: str, data: McKayData, I=None, cap: int = DEFAULT_CAP) -> TruncatedAlgebra:
    """Truncated basis of Pi, A = Pi/(b*), B = Pi_Gamma, or the corners B_I, A_I."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if kind in ("B_I", "A_I"):
        if not I:
            raise ValueError(f"{kind} needs a nonempty I")
        I = tuple(sorted(set(I)))
    if kind == "Pi":
        q = frame(data)
        return build_truncated(q, q.vertices, cap, kind)
    if kind in ("A", "A_I"):
        q = star_quiver(data)
        corner = (INF, *I) if kind == "A_I" else None
        return build_truncated(q, data.vertices, cap, kind, corner)
    q = mckay_quiver(data)
    return build_truncated(q, data.vertices, cap, kind, I if kind == "B_I" else None)


# --- the ternary description of A_I ------------------------------------------------


@dataclass(eq=False)
class TernaryElement:
    """(b, r, c) with b in B_I, r in e_I B e_0 (standing for r.b), c a scalar at inf."""

    b: dict
    r: dict
    c: Fraction = Fraction(0)

    def is_zero(self) -> bool:
        return not self.b and not self.r and self.c == 0

    def __eq__(self, other):
        return (
            isinstance(other, TernaryElement)
            and self.b == other.b
            and self.r == other.r
            and Fraction(self.c) == Fraction(other.c)
        )


@dataclass(eq=False)
class TernaryAlgebra:
    """Multiplication (b1,r1,c1)(b2,r2,c2) = (b1 b2, b1 r2 + r1 c2, c1 c2) inside a truncated B."""

    B: TruncatedAlgebra
    I: tuple[int, ...]

    @property
    def cap(self) -> int:
        return self.B.cap

    def unit(self) -> TernaryElement:
        return TernaryElement({(i, ()): Fraction(1) for i in self.I}, {}, Fraction(1))

    def multiply(self, x: TernaryElement, y: TernaryElement) -> TernaryElement:
        B = self.B
        b = B.multiply(x.b, y.b)
        r = B.multiply(x.b, y.r)
        # r carries an implicit b, one degree higher than its B-degree
        r = {p: c for p, c in r.items() if len(p[1]) + 1 <= self.cap}
        r = B.add(r, {p: c * y.c for p, c in x.r.items() if c * y.c})
        return TernaryElement(b, r, Fraction(x.c) * Fraction(y.c))

    def random_element(self, rng, max_terms: int = 4, coeff: int = 3) -> TernaryElement:
        b_paths = [p for (s, t, d), ps in self.B.basis.items() if s in self.I and t in self.I for p in ps]
        r_paths = [
            p
            for (s, t, d), ps in self.B.basis.items()
            if s == 0 and t in self.I and d + 1 <= self.cap
            for p in ps
        ]

        def pick(pool):
            out = {}
            if not pool:
                return out
            for _ in range(int(rng.integers(0, max_terms + 1))):
                p = pool[int(rng.integers(len(pool)))]
                c = Fraction(int(rng.integers(-coeff, coeff + 1)))
                if c:
                    out[p] = out.get(p, 0) + c
            return {p: c for p, c in out.items() if c}

        return TernaryElement(pick(b_paths), pick(r_paths), Fraction(int(rng.integers(-coeff, coeff + 1))))


def ternary_algebra(data: McKayData, I, cap: int = DEFAULT_CAP) -> TernaryAlgebra:
    I = tuple(sorted(set(I)))
    return TernaryAlgebra(truncated_basis("B", data, cap=cap), I)


def ternary_multiply(x: TernaryElement, y: TernaryElement, algebra: TernaryAlgebra) -> TernaryElement:
    return algebra.multiply(x, y)


def ternary_to_A(element: TernaryElement, algebra: TernaryAlgebra, A: TruncatedAlgebra) -> dict:
    """Embed (b, r, c) into the truncated A_I: b unchanged, r becomes r.b, c becomes c e_inf."""
    Bq, Aq = algebra.B.quiver, A.quiver
    name_to_A = {a.name: a.id for a in Aq.arrows}
    b_id = Aq.b.id

    def move(path, prefix=()):
        return (path[0] if not prefix else INF, prefix + tuple(name_to_A[Bq.arrows[k].name] for k in path[1]))

    out: dict = {}
    for p, c in element.b.items():
        out[move(p)] = c
    for p, c in element.r.items():
        out[move(p, (b_id,))] = c
    if element.c:
        out[(INF, ())] = Fraction(element.c)
    return A.normal_form(out)


# --- assembling A_I-modules ----------------------------------------------------------


@dataclass(eq=False)
class CyclicQuotient:
    """A B_I-module T plus the images of the generators of R_I in T.

    ``action[(s, t)]`` lists matrices T_s -> T_t spanning the B_I action;
    ``images[t]`` lists column vectors in T_t, the images of the R_I generators.
    """

    I: tuple[int, ...]
    dims: dict
    action: dict
    images: dict


def assemble_AI_module(quotient: CyclicQuotient) -> CorneredModule:
    """The A_I-module C + T: B_I acts on T, inf carries a scalar, R_I sends 1 to its image."""
    fld = QQ
    I = tuple(sorted(quotient.I))
    vertices = (INF, *I)
    dims = {INF: 1, **{i: quotient.dims.get(i, 0) for i in I}}
    generators = {k: list(v) for k, v in quotient.action.items() if v}
    for t, vecs in quotient.images.items():
        mats = [np.asarray(v, dtype=object).reshape(dims[t], 1) for v in vecs if dims[t]]
        if mats:
            generators[(INF, t)] = mats
    module = CorneredModule(vertices, dims, generators, fld)
    # T must be generated by the R_I images as a B_I-module
    seed = {
        t: np.hstack([np.asarray(v, dtype=object).reshape(dims[t], 1) for v in vecs])
        for t, vecs in quotient.images.items()
        if vecs and dims[t]
    }
    arrows = [(s, t, m) for (s, t), ms in quotient.action.items() for m in ms]
    gen = closure(I, dims, arrows, seed, fld)
    if any(gen[i].shape[1] < dims[i] for i in I):
        raise NotCyclic("T is not generated by the images of R_I")
    return module


def split_cornered(module: CorneredModule) -> CyclicQuotient:
    """Inverse of assemble_AI_module on modules of dimension 1 at inf."""
    I = tuple(v for v in module.vertices if v != INF)
    action = {k: v for k, v in module.generators.items() if INF not in k}
    images = {}
    for (s, t), ms in module.generators.items():
        if s == INF and t != INF:
            images[t] = [m[:, 0].copy() for m in ms]
    return CyclicQuotient(I, {i: module.dims[i] for i in I}, action, images)
