"""Dimension vectors, the stability parameters theta_I / eta_I, the set V(n_I),
the v' construction and the Cartan-matrix positivity argument.

All arithmetic here is exact (ints and Fractions).
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import QQ, determinant, inverse
from .mckay import INF, McKayData


class EmptyIndexSet(ValueError):
    pass


class AffineComponent(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class DimVector:
    """Dimensions at 0..r, plus the framing dimension ``inf`` (None when unframed)."""

    values: tuple[int, ...]
    inf: int | None = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if any(x < 0 for x in self.values):
            raise ValueError(f"negative dimension in {self.values}")
        if self.inf is not None and self.inf not in (0, 1):
            raise ValueError("framing dimension must be 0 or 1")

    def __getitem__(self, v: int) -> int:
        if v == INF:
            return self.inf or 0
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def __le__(self, other: "DimVector") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values)) and (self.inf or 0) <= (
            other.inf or 0
        )

    def __ge__(self, other):
        return other <= self

    @property
    def total(self) -> int:
        return sum(self.values) + (self.inf or 0)

    def items(self):
        if self.inf is not None:
            yield INF, self.inf
        yield from enumerate(self.values)

    def replace(self, updates: Mapping[int, int]) -> "DimVector":
        vals = list(self.values)
        inf = self.inf
        for k, x in updates.items():
            if k == INF:
                inf = x
            else:
                vals[k] = x
        return DimVector(tuple(vals), inf)

    def __add__(self, other: "DimVector") -> "DimVector":
        inf = None if self.inf is None and other.inf is None else (self.inf or 0) + (other.inf or 0)
        return DimVector(tuple(a + b for a, b in zip(self.values, other.values)), inf)

    def __str__(self):
        head = f"{self.inf};" if self.inf is not None else ""
        return "(" + head + ",".join(map(str, self.values)) + ")"

    def to_json(self) -> dict:
        return {"inf": self.inf, "values": list(self.values)}

    @classmethod
    def from_json(cls, data) -> "DimVector":
        return cls(tuple(data["values"]), data.get("inf"))

    @classmethod
    def framed(cls, values: Iterable[int]) -> "DimVector":
        return cls(tuple(values), 1)


@dataclass(frozen=True)
class Stability:
    """Weights at the framing vertex and at a set of unframed vertices."""

    inf: Fraction
    weights: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inf", Fraction(self.inf))
        object.__setattr__(
            self, "weights", {int(k): Fraction(w) for k, w in sorted(self.weights.items())}
        )

    def __getitem__(self, v: int) -> Fraction:
        if v == INF:
            return self.inf
        return self.weights.get(v, Fraction(0))

    def pair(self, dim: DimVector | Mapping[int, int]) -> Fraction:
        items = dim.items() if isinstance(dim, DimVector) else dim.items()
        return sum((self[v] * x for v, x in items), Fraction(0))

    def to_json(self) -> dict:
        return {
            "inf": str(self.inf),
            "vertices": list(self.weights),
            "weights": [str(w) for w in self.weights.values()],
        }

    @classmethod
    def from_json(cls, data) -> "Stability":
        verts = data.get("vertices", range(len(data["weights"])))
        return cls(Fraction(data["inf"]), {v: Fraction(w) for v, w in zip(verts, data["weights"])})

    def __str__(self):
        ws = ", ".join(f"{k}:{w}" for k, w in self.weights.items())
        return f"(inf:{self.inf}; {ws})"


def _index_set(I) -> tuple[int, ...]:
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise EmptyIndexSet("I must be non-empty")
    return I


def _n_map(I: tuple[int, ...], n_I) -> dict[int, int]:
    if isinstance(n_I, Mapping):
        out = {int(i): int(n_I[i]) for i in I}
    else:
        n_I = list(n_I)
        if len(n_I) != len(I):
            raise PreconditionError(f"n_I has {len(n_I)} entries for |I| = {len(I)}")
        out = dict(zip(I, (int(x) for x in n_I)))
    if any(x < 0 for x in out.values()):
        raise PreconditionError("n_I must be non-negative")
    return out


def theta_I(mckay: McKayData, I, v: DimVector) -> Stability:
    I = _index_set(I)
    if v.inf != 1:
        raise PreconditionError("theta_I needs a framed vector with v_inf = 1")
    return Stability(-sum(v[i] for i in I), {k: int(k in I) for k in mckay.vertices})


def eta_I(I, n_I) -> Stability:
    I = _index_set(I)
    n = _n_map(I, n_I)
    return Stability(-sum(n.values()), {i: 1 for i in I})


def generic_theta(mckay: McKayData, v: DimVector) -> Stability:
    """The point (-sum v_i; 1, ..., 1) of C_v^+."""
    return theta_I(mckay, mckay.vertices, v)


def in_C_plus(theta: Stability, vertices: Iterable[int] | None = None) -> bool:
    verts = theta.weights.keys() if vertices is None else vertices
    return bool(theta.weights) and all(theta[k] > 0 for k in verts)


def face_of(theta: Stability, v: DimVector | None = None) -> tuple[int, ...] | None:
    """The I with theta in the relative interior of sigma_I, or None outside the closed cone."""
    if any(w < 0 for w in theta.weights.values()):
        return None
    if v is not None and theta.pair(v) != 0:
        return None
    return tuple(k for k, w in theta.weights.items() if w > 0)


def outgoing_sum(mckay: McKayData, v: DimVector, k: int) -> int:
    """Sum of v_{h(e)} over arrows e of the framed quiver with tail k (b* contributes v_inf at 0)."""
    total = sum(mult * v[j] for j, mult in enumerate(mckay.adjacency[k]))
    if k == 0:
        total += v[INF]
    return total


def in_V(mckay: McKayData, I, n_I, v: DimVector) -> bool:
    I = _index_set(I)
    n = _n_map(I, n_I)
    if v.inf != 1:
        raise PreconditionError("membership in V(n_I) is defined for v_inf = 1")
    if any(v[i] != n[i] for i in I):
        return False
    return all(2 * v[k] >= outgoing_sum(mckay, v, k) for k in mckay.vertices if k not in I)


def outgoing_bound_violations(mckay: McKayData, I, v: DimVector) -> list[int]:
    """Vertices k outside inf and I where 2 v_k <= sum_{t(e)=k} v_{h(e)} fails."""
    I = set(I)
    return [
        k for k in mckay.vertices if k not in I and 2 * v[k] > outgoing_sum(mckay, v, k)
    ]


@dataclass(frozen=True)
class PathData:
    path: tuple[int, ...]
    distances: dict

    @property
    def interior(self) -> tuple[int, ...]:
        return self.path[1:-1]


def shortest_path_data(mckay: McKayData, source: int, targets) -> PathData:
    """BFS shortest path from ``source`` to the nearest vertex of ``targets``.

    Ties go to the smallest vertex first. ``distances`` covers interior vertices.
    """
    targets = set(targets)
    if not targets:
        raise PreconditionError("targets must be non-empty")
    if source in targets:
        return PathData((), {})
    parent = {source: None}
    queue = deque([source])
    hit = None
    while queue and hit is None:
        u = queue.popleft()
        for w in sorted(set(mckay.neighbours(u))):
            if w in parent:
                continue
            parent[w] = u
            if w in targets:
                hit = w
                break
            queue.append(w)
    if hit is None:
        raise PreconditionError("targets unreachable")
    path = [hit]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return PathData(tuple(path), {k: d for d, k in enumerate(path) if 0 < d < len(path) - 1})


@dataclass(frozen=True)
class VPrime:
    vprime: DimVector
    N: int
    k_prime: tuple[int, ...]
    distances: dict


def vprime_candidate(mckay: McKayData, I, n_I, N: int, path: PathData) -> DimVector | None:
    I = _index_set(I)
    n = _n_map(I, n_I)
    vals = []
    for k in mckay.vertices:
        if k in n:
            vals.append(n[k])
        else:
            val = N * mckay.irrep_dims[k] - path.distances.get(k, 0)
            if val < 0:
                return None
            vals.append(val)
    return DimVector(tuple(vals), 1)


def vprime_construction(mckay: McKayData, I, n_I, v: DimVector, max_N: int | None = None) -> VPrime:
    """v' in V(n_I) dominating v, with the smallest N that works.

    K' is the interior of a shortest path from 0 to I (empty when 0 is in I) and
    v'_k = N dim(rho_k) - d_k on K', N dim(rho_k) on the rest of the complement of I.
    """
    I = _index_set(I)
    n = _n_map(I, n_I)
    if v.inf != 1:
        raise PreconditionError("v must be framed with v_inf = 1")
    if any(v[i] != n[i] for i in I):
        raise PreconditionError("v_i must equal n_i on I")
    path = PathData((), {}) if 0 in I else shortest_path_data(mckay, 0, I)
    if max_N is None:
        max_N = 4 * (v.total + sum(n.values()) + len(mckay.irrep_dims)) + 8
    for N in range(max_N + 1):
        cand = vprime_candidate(mckay, I, n, N, path)
        if cand is not None and cand >= v and in_V(mckay, I, n, cand):
            return VPrime(cand, N, path.interior, dict(path.distances))
    raise RuntimeError(f"no N <= {max_N} gives a vector in V(n_I)")


def construct_vprime(mckay: McKayData, I, n_I, v: DimVector) -> DimVector:
    return vprime_construction(mckay, I, n_I, v).vprime


def padded_start(mckay: McKayData, I, n_I) -> DimVector:
    """The zero-padded vector: n_i on I, 0 elsewhere."""
    I = _index_set(I)
    n = _n_map(I, n_I)
    return DimVector(tuple(n.get(k, 0) for k in mckay.vertices), 1)


@dataclass(frozen=True)
class CartanBlock:
    vertex_subset: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return QQ.array(self.matrix, (len(self.vertex_subset),) * 2)

    def inverse(self) -> np.ndarray:
        return inverse(self.as_array(), QQ)

    @property
    def is_positive_definite(self) -> bool:
        a = self.as_array()
        return all(determinant(a[:k, :k], QQ) > 0 for k in range(1, a.shape[0] + 1))


def cartan_blocks(mckay: McKayData, K) -> list[CartanBlock]:
    """Connected components of the McKay graph induced on K, with Cartan matrices."""
    K = sorted(set(K))
    remaining = set(K)
    blocks = []
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in mckay.neighbours(u):
                if w in remaining and w not in comp:
                    comp.add(w)
                    stack.append(w)
        remaining -= comp
        verts = tuple(sorted(comp))
        mat = tuple(
            tuple(2 if a == b else -mckay.adjacency[a][b] for b in verts) for a in verts
        )
        block = CartanBlock(verts, mat)
        if len(verts) == len(mckay.irrep_dims) or not block.is_positive_definite:
            raise AffineComponent(f"component {verts} is not of finite type")
        blocks.append(block)
    return blocks


def cartan_inverse_nonneg(block: CartanBlock) -> bool:
    return all(x >= 0 for x in block.inverse().ravel())


def solve_w_bound(mckay: McKayData, I, v: DimVector, w: DimVector) -> bool:
    """Whether v >= w is forced: C (v - w)|_Lambda >= 0 on every block of the complement of I.

    When the block inequalities hold, v - w = C^{-1} C (v - w) >= 0 is re-derived exactly.
    """
    I = _index_set(I)
    if v.inf is None or w.inf is None or v.inf != w.inf or any(v[i] != w[i] for i in I):
        raise PreconditionError("v and w must be framed and agree on inf and I")
    K = [k for k in mckay.vertices if k not in I]
    if not K:
        return True
    for block in cartan_blocks(mckay, K):
        x = QQ.array([v[k] - w[k] for k in block.vertex_subset], (len(block.vertex_subset), 1))
        cx = block.as_array() @ x
        if any(c < 0 for c in cx.ravel()):
            return False
        back = block.inverse() @ cx
        assert all(b >= 0 for b in back.ravel()), "C^-1 C x >= 0 failed on a finite-type block"
    return True


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
