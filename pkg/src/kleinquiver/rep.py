"""Finite-dimensional representations of the framed preprojective algebra.

A representation assigns a matrix of shape ``dims[h(a)] x dims[t(a)]`` to every
arrow. Stability against theta in the closed cone over C_v^+ is decided by two
linear-algebra tests instead of a search over submodules:

* semistable  iff the submodule generated by the framing vector has full
  dimension on the support I of theta;
* stable      iff that submodule is everything and no nonzero submodule avoids
  {inf} and I.

Both follow from the weight pattern (negative at inf, positive on I, zero
elsewhere) and are cross-checked against exhaustive subspace enumeration in
``oracle.brute_force_stability``.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .linalg import QQ, RR, Field
from .mckay import INF, Arrow, Quiver, frame, mckay, vertex_name
from .stability import DimVector, Stability, face_of

SCHEMA_VERSION = 1


class ShapeMismatch(ValueError):
    pass


class UnsupportedStability(ValueError):
    pass


STABLE, SEMISTABLE, UNSTABLE = "stable", "semistable", "unstable"


@dataclass(eq=False)
class Representation:
    quiver: Quiver
    dims: DimVector
    maps: dict
    field: Field = QQ
    group: str | None = None

    def __post_init__(self):
        for a in self.quiver.arrows:
            m = self.maps.get(a.id)
            shape = (self.dims[a.head], self.dims[a.tail])
            if m is None:
                self.maps[a.id] = self.field.zeros(*shape)
            elif m.shape != shape:
                raise ShapeMismatch(f"arrow {a.name}: shape {m.shape}, expected {shape}")

    def __getitem__(self, name) -> np.ndarray:
        return self.maps[self.quiver.arrow(name).id]

    @property
    def vertices(self):
        return self.quiver.vertices

    def dim(self, v: int) -> int:
        return self.dims[v]

    def copy(self, maps=None, quiver=None) -> "Representation":
        return Representation(
            quiver or self.quiver,
            self.dims,
            {k: m.copy() for k, m in (maps or self.maps).items()},
            self.field,
            self.group,
        )

    # --- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        arrows = []
        for a in self.quiver.arrows:
            m = self.maps[a.id]
            if self.field.exact and self.field.p is None:
                entries = [[int(Fraction(x).numerator), int(Fraction(x).denominator)] for x in m.ravel()]
            else:
                entries = [x.item() if hasattr(x, "item") else x for x in m.ravel()]
            arrows.append(
                {
                    "id": a.id,
                    "name": a.name,
                    "tail": vertex_name(a.tail),
                    "head": vertex_name(a.head),
                    "eps": a.eps,
                    "rows": m.shape[0],
                    "cols": m.shape[1],
                    "entries": entries,
                }
            )
        return {
            "schema_version": SCHEMA_VERSION,
            "group": self.group,
            "field": self.field.name,
            "dims": self.dims.to_json(),
            "arrows": arrows,
        }

    @classmethod
    def from_json(cls, data: Mapping, quiver: Quiver | None = None) -> "Representation":
        field_ = _parse_field(data["field"])
        if quiver is None:
            quiver = _quiver_from_json(data)
        dims = DimVector.from_json(data["dims"])
        maps = {}
        for entry in data["arrows"]:
            shape = (entry["rows"], entry["cols"])
            raw = entry["entries"]
            if field_ is QQ:
                vals = [Fraction(n, d) for n, d in raw]
            else:
                vals = raw
            maps[entry["id"]] = field_.array(vals, shape) if vals else field_.zeros(*shape)
        return cls(quiver, dims, maps, field_, data.get("group"))


def _parse_vertex(name) -> int:
    return INF if name == "inf" else int(name)


def _quiver_from_json(data: Mapping) -> Quiver:
    """The group's framed quiver with the stored signs, or the bare arrow list if no group is named."""
    entries = data["arrows"]
    if data.get("group"):
        quiver = frame(mckay(data["group"]))
        flips = [e["name"] for e in entries if "eps" in e and quiver.arrows[e["id"]].eps != e["eps"]]
        return quiver.with_epsilon(flips) if flips else quiver
    by_name = {e["name"]: e["id"] for e in entries}
    arrows = []
    for e in sorted(entries, key=lambda e: e["id"]):
        name = e["name"]
        partner = by_name.get(name[:-1] if name.endswith("*") else name + "*")
        eps = e.get("eps", 1 if not name.endswith("*") else -1)
        arrows.append(Arrow(e["id"], name, _parse_vertex(e["tail"]), _parse_vertex(e["head"]), partner, eps))
    vertices = (INF, *range(len(data["dims"]["values"])))
    return Quiver(vertices, tuple(arrows))


def _parse_field(name: str) -> Field:
    if name == "QQ":
        return QQ
    if name == "RR":
        return RR
    if name.startswith("GF("):
        return linalg.GF(int(name[3:-1]))
    raise ValueError(f"unknown field {name!r}")


def dumps(rep: Representation) -> str:
    return json.dumps(rep.to_json(), sort_keys=True)


def loads(text: str) -> Representation:
    return Representation.from_json(json.loads(text))


# --- constructors --------------------------------------------------------------


def zero_rep(quiver: Quiver, dims: DimVector, field: Field = QQ, group=None) -> Representation:
    return Representation(quiver, dims, {}, field, group)


def vertex_simple(quiver: Quiver, k: int, n_vertices: int, field: Field = QQ) -> Representation:
    vals = [0] * n_vertices
    inf = None
    if k == INF:
        inf = 1
    else:
        vals[k] = 1
        inf = 0 if quiver.framed else None
    return zero_rep(quiver, DimVector(tuple(vals), inf), field)


def random_rep(quiver: Quiver, dims: DimVector, rng, field: Field = QQ, low=-3, high=3, density=1.0):
    maps = {}
    for a in quiver.arrows:
        shape = (dims[a.head], dims[a.tail])
        if field is RR:
            maps[a.id] = rng.standard_normal(shape)
            continue
        if field.p is not None:
            vals = rng.integers(0, field.p, size=shape)
        else:
            vals = rng.integers(low, high + 1, size=shape)
        if density < 1.0:
            vals = vals * (rng.random(shape) < density)
        maps[a.id] = field.array(vals.tolist(), shape)
    return Representation(quiver, dims, maps, field)


def direct_sum(left: Representation, right: Representation) -> Representation:
    if left.quiver is not right.quiver and left.quiver != right.quiver:
        raise ShapeMismatch("direct sum of representations of different quivers")
    fld = left.field
    dims = left.dims + right.dims
    maps = {}
    for a in left.quiver.arrows:
        m1, m2 = left.maps[a.id], right.maps[a.id]
        block = fld.zeros(m1.shape[0] + m2.shape[0], m1.shape[1] + m2.shape[1])
        block[: m1.shape[0], : m1.shape[1]] = m1
        block[m1.shape[0] :, m1.shape[1] :] = m2
        maps[a.id] = block
    return Representation(left.quiver, dims, maps, fld, left.group)


def pad_with_simples(rep: Representation, multiplicities: Mapping[int, int]) -> Representation:
    """rep plus vertex simples S_k^(multiplicities[k]) (zero maps, block diagonal)."""
    updates = {k: rep.dims[k] + m for k, m in multiplicities.items() if m}
    if not updates:
        return rep.copy()
    dims = rep.dims.replace(updates)
    maps = {}
    for a in rep.quiver.arrows:
        m = rep.maps[a.id]
        block = rep.field.zeros(dims[a.head], dims[a.tail])
        block[: m.shape[0], : m.shape[1]] = m
        maps[a.id] = block
    return Representation(rep.quiver, dims, maps, rep.field, rep.group)


def sign_twist(rep: Representation, target: Quiver) -> Representation:
    """Transport a module to another choice of eps on the same arrows.

    On every pair whose sign differs, the member that carried eps = -1 in the
    source quiver has its matrix negated; the relations are then preserved.
    """
    maps = {}
    for a in rep.quiver.arrows:
        m = rep.maps[a.id]
        if a.partner is not None and a.eps == -1 and target.arrows[a.id].eps != a.eps:
            m = rep.field.scale(-1, m)
        maps[a.id] = m
    return Representation(target, rep.dims, maps, rep.field, rep.group)


# --- relations -----------------------------------------------------------------


def moment_residual(rep: Representation) -> dict:
    """For each vertex i: sum over arrows a with head i of eps(a) M_a M_{a*}."""
    fld = rep.field
    out = {}
    for v in rep.vertices:
        total = fld.zeros(rep.dims[v], rep.dims[v])
        for a in rep.quiver.in_arrows(v):
            if a.partner is None:
                continue
            term = fld.matmul(rep.maps[a.id], rep.maps[a.partner])
            total = fld.add(total, term) if a.eps == 1 else fld.sub(total, term)
        out[v] = total
    return out


def residual_norm(rep: Representation) -> float:
    return float(
        np.sqrt(sum(float(np.sum(linalg.to_float(m) ** 2)) for m in moment_residual(rep).values()))
    )


def is_pi_module(rep: Representation) -> bool:
    return all(rep.field.is_zero_matrix(m) for m in moment_residual(rep).values())


def is_A_module(rep: Representation) -> bool:
    bstar = rep.quiver.b_star
    return is_pi_module(rep) and (bstar is None or rep.field.is_zero_matrix(rep.maps[bstar.id]))


# --- submodules ----------------------------------------------------------------


@dataclass
class SubmoduleWitness:
    basis: dict
    dims: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {v: b.shape[1] for v, b in self.basis.items()}

    def dim(self, v: int) -> int:
        return self.dims.get(v, 0)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total == 0


def _arrow_list(rep: Representation):
    return [(a.tail, a.head, rep.maps[a.id]) for a in rep.quiver.arrows]


def closure(vertices, dims, arrows, seed, fld: Field) -> dict:
    """Smallest arrow-closed family of subspaces containing ``seed``.

    ``arrows`` is a list of (tail, head, matrix); ``seed`` maps vertex -> column matrix.
    """
    basis = {}
    for v in vertices:
        s = seed.get(v)
        if s is None or s.shape[1] == 0:
            basis[v] = fld.zeros(dims[v], 0)
        else:
            basis[v] = linalg.column_basis(s, fld)
    changed = True
    while changed:
        changed = False
        for tail, head, m in arrows:
            if basis[tail].shape[1] == 0 or dims[head] == 0:
                continue
            image = fld.matmul(m, basis[tail])
            merged = linalg.hstack([basis[head], image], dims[head], fld)
            new = linalg.column_basis(merged, fld)
            if new.shape[1] > basis[head].shape[1]:
                basis[head] = new
                changed = True
    return basis


def largest_avoiding(vertices, dims, arrows, avoid, fld: Field) -> dict:
    """Largest arrow-closed family of subspaces vanishing on ``avoid``."""
    basis = {
        v: (fld.zeros(dims[v], 0) if v in avoid else fld.identity(dims[v])) for v in vertices
    }
    changed = True
    while changed:
        changed = False
        ann = {v: linalg.annihilator(basis[v], fld) for v in vertices}
        for v in vertices:
            b = basis[v]
            if b.shape[1] == 0:
                continue
            rows = [fld.matmul(ann[head], fld.matmul(m, b)) for tail, head, m in arrows if tail == v]
            constraints = linalg.vstack(rows, b.shape[1], fld)
            if constraints.shape[0] == 0:
                continue
            kernel = linalg.nullspace(constraints, fld)
            if kernel.shape[1] < b.shape[1]:
                basis[v] = linalg.column_basis(fld.matmul(b, kernel), fld) if kernel.shape[1] else fld.zeros(dims[v], 0)
                changed = True
                ann[v] = linalg.annihilator(basis[v], fld)
    return basis


def submodule_closure(rep: Representation, seed: Mapping) -> SubmoduleWitness:
    fld = rep.field
    seed_m = {}
    for v, vecs in seed.items():
        if isinstance(vecs, np.ndarray):
            seed_m[v] = vecs
        else:
            vecs = list(vecs)
            seed_m[v] = (
                fld.array([list(x) for x in vecs], (len(vecs), rep.dims[v])).T.copy()
                if vecs
                else fld.zeros(rep.dims[v], 0)
            )
    return SubmoduleWitness(closure(rep.vertices, rep.dims, _arrow_list(rep), seed_m, fld))


def framing_closure(rep: Representation) -> SubmoduleWitness:
    if rep.dims[INF] != 1:
        raise UnsupportedStability("framing closure needs dim 1 at inf")
    return submodule_closure(rep, {INF: rep.field.identity(1)})


def max_submodule_avoiding(rep: Representation, avoid) -> SubmoduleWitness:
    avoid = set(avoid)
    return SubmoduleWitness(
        largest_avoiding(rep.vertices, rep.dims, _arrow_list(rep), avoid, rep.field)
    )


def is_submodule(rep: Representation, basis: Mapping) -> bool:
    fld = rep.field
    for a in rep.quiver.arrows:
        bt, bh = basis[a.tail], basis[a.head]
        if bt.shape[1] == 0:
            continue
        image = fld.matmul(rep.maps[a.id], bt)
        merged = linalg.hstack([bh, image], rep.dims[a.head], fld)
        if linalg.rank(merged, fld) > linalg.rank(bh, fld) if bh.shape[1] else linalg.rank(image, fld) > 0:
            return False
    return True


# --- stability -----------------------------------------------------------------


def _support(rep: Representation, theta: Stability) -> tuple[int, ...]:
    I = face_of(theta)
    if I is None:
        raise UnsupportedStability(f"{theta} has a negative weight; outside the closed cone")
    if theta.inf > 0:
        raise UnsupportedStability("weight at inf must be non-positive")
    if rep.dims[INF] != 1:
        raise UnsupportedStability("stability tests need dim 1 at the framing vertex")
    return I


def stability_verdict(rep: Representation, theta: Stability) -> str:
    I = _support(rep, theta)
    if theta.pair(rep.dims) != 0:
        return UNSTABLE
    gen = framing_closure(rep)
    if any(gen.dim(i) < rep.dims[i] for i in I):
        return UNSTABLE
    if gen.total < rep.dims.total:
        return SEMISTABLE
    if not max_submodule_avoiding(rep, {INF, *I}).is_zero():
        return SEMISTABLE
    return STABLE


def is_semistable(rep: Representation, theta: Stability) -> bool:
    return stability_verdict(rep, theta) != UNSTABLE


def is_stable(rep: Representation, theta: Stability) -> bool:
    return stability_verdict(rep, theta) == STABLE


# --- restriction to the corner {inf} u I -----------------------------------------


@dataclass(eq=False)
class CorneredModule:
    """A module over the cornered algebra on {inf} u I.

    ``generators[(s, t)]`` is a basis of the span of the actions of paths from
    s to t whose interior avoids {inf} u I; these generate the algebra.
    """

    vertices: tuple[int, ...]
    dims: dict
    generators: dict
    field: Field = QQ

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total == 0

    def _arrows(self):
        return [(s, t, m) for (s, t), ms in self.generators.items() for m in ms]

    def closure_of_inf(self) -> dict:
        seed = {INF: self.field.identity(1)} if self.dims.get(INF) == 1 else {}
        return closure(self.vertices, self.dims, self._arrows(), seed, self.field)

    def generated_at_inf(self) -> bool:
        if self.dims.get(INF) != 1:
            return False
        basis = self.closure_of_inf()
        return all(basis[v].shape[1] == self.dims[v] for v in self.vertices)

    def stability_verdict(self, eta: Stability) -> str:
        """Verdict for weights supported on {inf} u I (eta_I shaped)."""
        if any(eta[v] <= 0 for v in self.vertices if v != INF) or eta.inf > 0:
            raise UnsupportedStability("eta must be positive on I and non-positive at inf")
        if self.dims.get(INF) != 1:
            raise UnsupportedStability("cornered stability needs dim 1 at inf")
        if eta.pair(self.dims) != 0:
            return UNSTABLE
        # every vertex other than inf has positive weight
        return STABLE if self.generated_at_inf() else UNSTABLE

    def is_stable(self, eta: Stability) -> bool:
        return self.stability_verdict(eta) == STABLE

    def dim_vector(self) -> dict:
        return dict(self.dims)

    def to_json(self) -> dict:
        return {
            "vertices": [vertex_name(v) for v in self.vertices],
            "dims": {vertex_name(v): d for v, d in self.dims.items()},
            "generator_counts": {
                f"{vertex_name(s)}->{vertex_name(t)}": len(ms) for (s, t), ms in self.generators.items()
            },
        }


def _span_basis(mats, rows, cols, fld: Field):
    if not mats:
        return []
    if rows * cols == 0:
        return []
    flat = linalg.hstack([m.reshape(rows * cols, 1) for m in mats], rows * cols, fld)
    basis = linalg.column_basis(flat, fld)
    return [basis[:, k].reshape(rows, cols).copy() for k in range(basis.shape[1])]


def restrict_jI(rep: Representation, I, cap: int | None = None) -> CorneredModule:
    """The restriction e_I-bar M with the action of paths between corner vertices.

    b* is never used (it is zero in A). ``cap`` bounds the number of interior
    vertices followed; by default the spans are iterated until they stabilise.
    """
    fld = rep.field
    corner = (INF, *sorted(set(I)))
    cset = set(corner)
    inner = [v for v in rep.vertices if v not in cset]
    arrows = [a for a in rep.quiver.arrows if a.name != "b*"]
    dims = {v: rep.dims[v] for v in corner}
    generators = {}
    limit = cap if cap is not None else rep.dims.total ** 2 + 1
    for s in corner:
        spans = {
            k: _span_basis(
                [rep.maps[a.id] for a in arrows if a.tail == s and a.head == k],
                rep.dims[k],
                rep.dims[s],
                fld,
            )
            for k in inner
        }
        for _ in range(limit):
            grown = False
            for k in inner:
                new = list(spans[k])
                for a in arrows:
                    if a.head == k and a.tail in spans:
                        new += [fld.matmul(rep.maps[a.id], x) for x in spans[a.tail]]
                basis = _span_basis(new, rep.dims[k], rep.dims[s], fld)
                if len(basis) > len(spans[k]):
                    spans[k] = basis
                    grown = True
            if not grown:
                break
        for t in corner:
            mats = [rep.maps[a.id] for a in arrows if a.tail == s and a.head == t]
            for a in arrows:
                if a.head == t and a.tail in spans:
                    mats += [fld.matmul(rep.maps[a.id], x) for x in spans[a.tail]]
            basis = _span_basis(mats, rep.dims[t], rep.dims[s], fld)
            if basis:
                generators[(s, t)] = basis
    return CorneredModule(corner, dims, generators, fld)


# --- field changes -------------------------------------------------------------------


def reduce_mod_p(rep: Representation, p: int) -> Representation | None:
    """Reduce an exact rational representation mod p (None if a denominator is divisible by p)."""
    maps = {}
    for k, m in rep.maps.items():
        red = linalg.reduce_mod_p(m, p)
        if red is None:
            return None
        maps[k] = red
    return Representation(rep.quiver, rep.dims, maps, linalg.GF(p), rep.group)


def to_numeric(rep: Representation) -> Representation:
    maps = {k: linalg.to_float(m) for k, m in rep.maps.items()}
    return Representation(rep.quiver, rep.dims, maps, RR, rep.group)


def subrepresentation(rep: Representation, witness: SubmoduleWitness) -> Representation:
    """The submodule spanned by ``witness`` in the coordinates of its bases."""
    fld = rep.field
    basis = witness.basis
    left_inv = {}
    for v in rep.vertices:
        b = basis[v]
        if b.shape[1] == 0:
            left_inv[v] = fld.zeros(0, rep.dims[v])
            continue
        gram = fld.matmul(b.T.copy(), b)
        left_inv[v] = fld.matmul(linalg.inverse(gram, fld), b.T.copy())
    dims_vals = tuple(basis[v].shape[1] for v in rep.vertices if v != INF)
    inf = basis[INF].shape[1] if rep.quiver.framed else None
    maps = {}
    for a in rep.quiver.arrows:
        maps[a.id] = fld.matmul(left_inv[a.head], fld.matmul(rep.maps[a.id], basis[a.tail]))
    return Representation(rep.quiver, DimVector(dims_vals, inf), maps, fld, rep.group)
