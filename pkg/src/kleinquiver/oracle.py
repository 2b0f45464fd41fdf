"""Ground truth for small cases.

* Colored partitions: Z/m-invariant monomial ideals of C[x, y] with the action
  (x, y) -> (w x, w^-1 y). The cell (a, b) is the monomial x^a y^b and has color
  (a - b) mod m. Each one gives an exact Pi-module with b* = 0.
* Brute-force stability over GF(2)/GF(3) by listing every subspace family.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import GF, QQ, Field
from .mckay import INF, McKayData, Quiver, frame, mckay
from .rep import SEMISTABLE, STABLE, UNSTABLE, Representation
from .stability import DimVector, Stability

BRUTE_FORCE_MAX_DIM = 6


class QuiverMismatch(ValueError):
    pass


class DimensionTooLarge(RuntimeError):
    pass


# --- colored partitions ----------------------------------------------------------


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n, largest parts first, in reverse lexicographic order."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in rec(rest - part, part):
                yield (part, *tail)

    yield from rec(n, n)


def cells(partition) -> list[tuple[int, int]]:
    """Cells (a, b) = x^a y^b, row b having partition[b] cells."""
    return [(a, b) for b, row in enumerate(partition) for a in range(row)]


def content(partition, m: int) -> tuple[int, ...]:
    out = [0] * m
    for a, b in cells(partition):
        out[(a - b) % m] += 1
    return tuple(out)


@dataclass(frozen=True)
class ColoredPartition:
    partition: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("modulus must be at least 2")
        p = tuple(int(x) for x in self.partition)
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"{p} is not a partition")
        object.__setattr__(self, "partition", p)

    @property
    def size(self) -> int:
        return sum(self.partition)

    @property
    def content(self) -> DimVector:
        return DimVector(content(self.partition, self.m), inf=None)

    def cells(self) -> list[tuple[int, int]]:
        return cells(self.partition)

    def color(self, cell) -> int:
        return (cell[0] - cell[1]) % self.m


def enumerate_colored_partitions(m: int, v) -> list[ColoredPartition]:
    target = tuple(v.values if isinstance(v, DimVector) else v)
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if len(target) != m:
        raise ValueError(f"content vector needs {m} entries")
    return [ColoredPartition(p, m) for p in partitions(sum(target)) if content(p, m) == target]


def count_by_content(m: int, n: int) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for p in partitions(n):
        c = content(p, m)
        out[c] = out.get(c, 0) + 1
    return out


# --- partition representations -----------------------------------------------------


def _is_cyclic_quiver(quiver: Quiver, m: int) -> bool:
    return quiver.framed and set(quiver.vertices) == {INF, *range(m)}


def _x_or_y(arrow, m: int) -> str:
    """Whether an unframed arrow acts as multiplication by x or by y."""
    if m == 2:
        base = arrow.name.rstrip("*")
        pair_index = base.rsplit("_", 1)[-1]
        along = arrow.tail == 0  # arrows 0 -> 1 are unstarred
        if pair_index == "0":
            return "x" if along else "y"
        return "y" if along else "x"
    return "x" if (arrow.tail + 1) % m == arrow.head else "y"


def partition_to_rep(p: ColoredPartition, quiver: Quiver | None = None) -> Representation:
    """C[x, y]/J as a framed module: x, y act on monomials, b hits the cell (0, 0), b* = 0."""
    m = p.m
    data = mckay(f"A{m - 1}")
    quiver = quiver or frame(data)
    if not _is_cyclic_quiver(quiver, m):
        raise QuiverMismatch(f"quiver is not the framed quiver of Z/{m}")
    by_color: dict[int, list] = {c: [] for c in range(m)}
    for cell in sorted(p.cells(), key=lambda ab: (ab[1], ab[0])):
        by_color[p.color(cell)].append(cell)
    index = {cell: (c, k) for c, lst in by_color.items() for k, cell in enumerate(lst)}
    dims = DimVector(tuple(len(by_color[c]) for c in range(m)), inf=1)
    maps = {}
    for a in quiver.arrows:
        mat = QQ.zeros(dims[a.head], dims[a.tail])
        if a.name == "b":
            if dims[0]:
                mat[0, 0] = QQ.coerce(1)
        elif a.name != "b*":
            kind = _x_or_y(a, m)
            for cell in by_color[a.tail]:
                target = (cell[0] + 1, cell[1]) if kind == "x" else (cell[0], cell[1] + 1)
                if target in index:
                    mat[index[target][1], index[cell][1]] = QQ.coerce(1)
            # eps(x-member) = -1 means the y-member carries the sign
            x_member = a if kind == "x" else quiver.star(a)
            if kind == "y" and x_member.eps == -1:
                mat = -mat
        maps[a.id] = mat
    return Representation(quiver, dims, maps, QQ, f"A{m - 1}")


# --- brute force ------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _subspaces(n: int, p: int) -> tuple[frozenset, ...]:
    """Every subspace of GF(p)^n, each as the frozenset of its vectors."""
    out = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [
                (row, col)
                for row, pc in enumerate(pivots)
                for col in range(pc + 1, n)
                if col not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                basis = np.zeros((k, n), dtype=np.int64)
                for row, pc in enumerate(pivots):
                    basis[row, pc] = 1
                for (row, col), val in zip(free, values):
                    basis[row, col] = val
                vecs = set()
                for coeffs in itertools.product(range(p), repeat=k):
                    vec = (np.array(coeffs, dtype=np.int64) @ basis) % p if k else np.zeros(n, dtype=np.int64)
                    vecs.add(tuple(int(x) for x in vec))
                out.append(frozenset(vecs))
    return tuple(out)


def _basis_of(space: frozenset, n: int, p: int) -> list[tuple[int, ...]]:
    basis: list[tuple[int, ...]] = []
    span = {tuple([0] * n)}
    for vec in sorted(space):
        if vec not in span:
            basis.append(vec)
            span = {
                tuple((x + c * y) % p for x, y in zip(s, vec)) for s in span for c in range(p)
            }
        if len(span) == len(space):
            break
    return basis


def closed_families(rep: Representation) -> Iterator[dict]:
    """All arrow-closed subspace families of a GF(p) representation."""
    p = rep.field.p
    verts = list(rep.vertices)
    options = [_subspaces(rep.dims[v], p) for v in verts]
    arrows = [(a.tail, a.head, np.asarray(rep.maps[a.id], dtype=np.int64)) for a in rep.quiver.arrows]
    for choice in itertools.product(*options):
        family = dict(zip(verts, choice))
        ok = True
        for tail, head, mat in arrows:
            if mat.size == 0 or len(family[tail]) == 1:
                continue
            target = family[head]
            for vec in _basis_of(family[tail], rep.dims[tail], p):
                img = tuple(int(x) for x in (mat @ np.array(vec, dtype=np.int64)) % p)
                if img not in target:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield family


def _dim(space: frozenset, p: int) -> int:
    return round(np.log(len(space)) / np.log(p))


def brute_force_stability(rep: Representation, theta: Stability) -> str:
    """Apply the definition literally: theta(M) = 0 and theta(N) > 0 (>= 0) on proper N != 0."""
    if rep.field.p not in (2, 3):
        raise ValueError("brute force runs over GF(2) or GF(3)")
    unframed = sum(rep.dims[v] for v in rep.vertices if v != INF)
    if unframed > BRUTE_FORCE_MAX_DIM:
        raise DimensionTooLarge(f"dimension {unframed} exceeds {BRUTE_FORCE_MAX_DIM}")
    if theta.pair(rep.dims) != 0:
        return UNSTABLE
    p = rep.field.p
    total = rep.dims.total
    verdict = STABLE
    for family in closed_families(rep):
        dims = {v: _dim(s, p) for v, s in family.items()}
        size = sum(dims.values())
        if size == 0 or size == total:
            continue
        value = sum(theta[v] * d for v, d in dims.items())
        if value < 0:
            return UNSTABLE
        if value == 0:
            verdict = SEMISTABLE
    return verdict


def all_partition_reps(m: int, max_size: int) -> Iterator[tuple[ColoredPartition, Representation]]:
    quiver = frame(mckay(f"A{m - 1}"))
    for n in range(max_size + 1):
        for part in partitions(n):
            cp = ColoredPartition(part, m)
            yield cp, partition_to_rep(cp, quiver)


def field_for(p: int) -> Field:
    return GF(p)


def cyclic_modulus(data: McKayData) -> int | None:
    return data.group.m if data.group.kind == "cyclic" else None
