"""McKay graphs and framed McKay quivers of finite subgroups of SL(2, C).

Vertices are labelled in the Bourbaki convention for affine ADE diagrams,
with 0 the trivial representation. The framing vertex is ``INF`` (= -1), so
that sorting puts it first.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

INF = -1


class InvalidGroupParameter(ValueError):
    pass


class NoSuchAutomorphism(ValueError):
    pass


def vertex_name(v: int) -> str:
    return "inf" if v == INF else str(v)


@dataclass(frozen=True)
class GroupFamily:
    """``kind`` is one of cyclic, binary_dihedral, E6, E7, E8; ``m`` parametrises the first two."""

    kind: str
    m: int | None = None

    def __post_init__(self):
        if self.kind in ("cyclic", "binary_dihedral"):
            if self.m is None or self.m < 2:
                raise InvalidGroupParameter(f"{self.kind} needs m >= 2, got {self.m}")
        elif self.kind in ("E6", "E7", "E8"):
            if self.m is not None:
                raise InvalidGroupParameter(f"{self.kind} takes no parameter")
        else:
            raise InvalidGroupParameter(f"unknown group family {self.kind!r}")

    @property
    def order(self) -> int:
        return {
            "cyclic": self.m,
            "binary_dihedral": 4 * (self.m or 0),
            "E6": 24,
            "E7": 48,
            "E8": 120,
        }[self.kind]

    @property
    def dynkin(self) -> str:
        """Affine ADE label: A<m-1>, D<m+2>, E6, E7, E8."""
        if self.kind == "cyclic":
            return f"A{self.m - 1}"
        if self.kind == "binary_dihedral":
            return f"D{self.m + 2}"
        return self.kind

    @classmethod
    def parse(cls, label: str) -> "GroupFamily":
        """Parse ``A<n>``, ``D<n>``, ``E6|E7|E8`` (also ``Z<m>`` for the cyclic group of order m)."""
        label = label.strip().upper()
        try:
            if label in ("E6", "E7", "E8"):
                return cls(label)
            if label.startswith("A"):
                return cls("cyclic", int(label[1:]) + 1)
            if label.startswith("Z"):
                return cls("cyclic", int(label[1:]))
            if label.startswith("D"):
                n = int(label[1:])
                if n < 4:
                    raise InvalidGroupParameter(f"D{n}: binary dihedral types start at D4")
                return cls("binary_dihedral", n - 2)
        except ValueError as exc:
            if isinstance(exc, InvalidGroupParameter):
                raise
            raise InvalidGroupParameter(f"cannot parse group {label!r}") from exc
        raise InvalidGroupParameter(f"cannot parse group {label!r}")


@dataclass(frozen=True)
class McKayData:
    group: GroupFamily
    irrep_dims: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]
    # twists[i]: the permutation k -> (rho_k tensor dual(rho_i)), for dim rho_i = 1
    twists: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def r(self) -> int:
        return len(self.irrep_dims) - 1

    @property
    def delta(self) -> tuple[int, ...]:
        return self.irrep_dims

    @property
    def vertices(self) -> range:
        return range(len(self.irrep_dims))

    def neighbours(self, k: int) -> list[int]:
        """Neighbours of k in the McKay graph, repeated by edge multiplicity."""
        out = []
        for j, mult in enumerate(self.adjacency[k]):
            out.extend([j] * mult)
        return out

    def check(self) -> None:
        """Raise AssertionError unless all McKay-data invariants hold."""
        n = len(self.irrep_dims)
        adj = self.adjacency
        assert all(len(row) == n for row in adj)
        assert all(adj[i][j] == adj[j][i] for i in range(n) for j in range(n)), "asymmetric"
        assert all(adj[i][i] == 0 for i in range(n)), "loops"
        assert self.irrep_dims[0] == 1
        assert sum(d * d for d in self.irrep_dims) == self.group.order, "sum of dim^2 != |G|"
        for k in range(n):
            rhs = sum(adj[k][j] * self.irrep_dims[j] for j in range(n))
            assert 2 * self.irrep_dims[k] == rhs, f"McKay equality fails at {k}"

    def to_json(self) -> dict:
        return {
            "family": self.group.kind,
            "m": self.group.m,
            "type": self.group.dynkin,
            "order": self.group.order,
            "dims": list(self.irrep_dims),
            "adjacency": [list(row) for row in self.adjacency],
            "delta": list(self.delta),
        }

    @classmethod
    def from_json(cls, data: dict) -> "McKayData":
        group = GroupFamily(data["family"], data.get("m"))
        return build_mckay(group)


# --- character-table route (cyclic and binary dihedral) --------------------


def _multiplicity(chars, sizes, order, target, product) -> int:
    total = sum(s * p * t.conjugate() for s, p, t in zip(sizes, product, chars[target]))
    value = total / order
    n = round(value.real)
    if abs(value - n) > 1e-9:
        raise ArithmeticError(f"non-integral multiplicity {value}")
    return n


def _tensor_table(chars, sizes, order, left, right):
    """Decomposition of chars[left] * chars[right] into irreducibles."""
    prod = [a * b for a, b in zip(chars[left], chars[right])]
    return [_multiplicity(chars, sizes, order, j, prod) for j in range(len(chars))]


def _cyclic_characters(m):
    w = [cmath.exp(2j * math.pi * k / m) for k in range(m)]
    chars = [[w[(j * k) % m] for j in range(m)] for k in range(m)]
    natural = [w[j % m] + w[(-j) % m] for j in range(m)]
    return chars, [1] * m, natural


def _dicyclic_characters(m):
    # classes: 1, a^m, {a^k, a^-k} (k=1..m-1), x a^even, x a^odd
    sizes = [1, 1] + [2] * (m - 1) + [m, m]
    powers = [0, m] + list(range(1, m))

    def linear(s, t):
        return [s**k for k in powers] + [t, t * s]

    odd_t = 1j if m % 2 else 1
    chars = [linear(1, 1), linear(1, -1), linear(-1, odd_t), linear(-1, -odd_t)]
    for h in range(1, m):
        chars.append([2 * math.cos(math.pi * h * k / m) for k in powers] + [0, 0])
    chars = [[complex(x) for x in row] for row in chars]
    return chars, sizes, chars[4]


def _from_characters(group: GroupFamily):
    if group.kind == "cyclic":
        chars, sizes, natural = _cyclic_characters(group.m)
    else:
        chars, sizes, natural = _dicyclic_characters(group.m)
    order = group.order
    n = len(chars)
    dims = [round(c[0].real) for c in chars]
    adj = []
    for i in range(n):
        prod = [a * b for a, b in zip(chars[i], natural)]
        adj.append([_multiplicity(chars, sizes, order, j, prod) for j in range(n)])
    duals = []
    for i in range(n):
        conj = [x.conjugate() for x in chars[i]]
        duals.append(next(j for j in range(n) if all(abs(a - b) < 1e-9 for a, b in zip(chars[j], conj))))

    if group.kind == "cyclic":
        perm = list(range(n))
    else:
        perm = _dicyclic_bourbaki_order(adj, group.m)
    # perm[new] = old index
    inv = {old: new for new, old in enumerate(perm)}
    adjacency = tuple(tuple(adj[perm[a]][perm[b]] for b in range(n)) for a in range(n))
    irrep_dims = tuple(dims[perm[a]] for a in range(n))
    twists = {}
    for a in range(n):
        if irrep_dims[a] != 1:
            continue
        dual_old = duals[perm[a]]
        image = []
        for k in range(n):
            decomposition = _tensor_table(chars, sizes, order, perm[k], dual_old)
            (target,) = [j for j, mult in enumerate(decomposition) if mult]
            image.append(inv[target])
        twists[a] = tuple(image)
    return irrep_dims, adjacency, twists


def _dicyclic_bourbaki_order(adj, m):
    """Return perm with perm[bourbaki_label] = character index."""
    two_dim = list(range(4, 4 + m - 1))
    first, last = two_dim[0], two_dim[-1]
    near = [c for c in (1, 2, 3) if adj[first][c]]
    leaf1 = near[0]
    far = [c for c in (1, 2, 3) if c != leaf1 and adj[last][c]]
    return [0, leaf1] + two_dim + far


# --- embedded exceptional tables ---------------------------------------------

_EXCEPTIONAL = {
    "E6": (
        (1, 1, 2, 2, 3, 2, 1),
        (
            (0, 0, 1, 0, 0, 0, 0),
            (0, 0, 0, 1, 0, 0, 0),
            (1, 0, 0, 0, 1, 0, 0),
            (0, 1, 0, 0, 1, 0, 0),
            (0, 0, 1, 1, 0, 1, 0),
            (0, 0, 0, 0, 1, 0, 1),
            (0, 0, 0, 0, 0, 1, 0),
        ),
        {
            0: (0, 1, 2, 3, 4, 5, 6),
            1: (6, 0, 5, 2, 4, 3, 1),
            6: (1, 6, 3, 5, 4, 2, 0),
        },
    ),
    "E7": (
        (1, 2, 2, 3, 4, 3, 2, 1),
        (
            (0, 1, 0, 0, 0, 0, 0, 0),
            (1, 0, 0, 1, 0, 0, 0, 0),
            (0, 0, 0, 0, 1, 0, 0, 0),
            (0, 1, 0, 0, 1, 0, 0, 0),
            (0, 0, 1, 1, 0, 1, 0, 0),
            (0, 0, 0, 0, 1, 0, 1, 0),
            (0, 0, 0, 0, 0, 1, 0, 1),
            (0, 0, 0, 0, 0, 0, 1, 0),
        ),
        {
            0: (0, 1, 2, 3, 4, 5, 6, 7),
            7: (7, 6, 2, 5, 4, 3, 1, 0),
        },
    ),
    "E8": (
        (1, 2, 3, 4, 6, 5, 4, 3, 2),
        (
            (0, 0, 0, 0, 0, 0, 0, 0, 1),
            (0, 0, 0, 1, 0, 0, 0, 0, 0),
            (0, 0, 0, 0, 1, 0, 0, 0, 0),
            (0, 1, 0, 0, 1, 0, 0, 0, 0),
            (0, 0, 1, 1, 0, 1, 0, 0, 0),
            (0, 0, 0, 0, 1, 0, 1, 0, 0),
            (0, 0, 0, 0, 0, 1, 0, 1, 0),
            (0, 0, 0, 0, 0, 0, 1, 0, 1),
            (1, 0, 0, 0, 0, 0, 0, 1, 0),
        ),
        {0: (0, 1, 2, 3, 4, 5, 6, 7, 8)},
    ),
}


def build_mckay(group: GroupFamily) -> McKayData:
    if group.kind in _EXCEPTIONAL:
        dims, adjacency, twists = _EXCEPTIONAL[group.kind]
        data = McKayData(group, dims, adjacency, dict(twists))
    else:
        dims, adjacency, twists = _from_characters(group)
        data = McKayData(group, dims, adjacency, twists)
    data.check()
    return data


def mckay(label: str) -> McKayData:
    """Shorthand: ``mckay("D5")``."""
    return build_mckay(GroupFamily.parse(label))


# --- quivers -------------------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    id: int
    name: str
    tail: int
    head: int
    partner: int | None
    eps: int


@dataclass(frozen=True)
class Quiver:
    """A quiver with an optional involution ``a <-> a*`` and signs ``eps``."""

    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...]

    @cached_property
    def _by_name(self):
        return {a.name: a for a in self.arrows}

    def arrow(self, key) -> Arrow:
        return self.arrows[key] if isinstance(key, int) else self._by_name[key]

    def star(self, a: Arrow) -> Arrow:
        return self.arrows[a.partner]

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def in_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.head == v]

    @property
    def framed(self) -> bool:
        return INF in self.vertices

    @property
    def b(self) -> Arrow:
        return self._by_name["b"]

    @property
    def b_star(self) -> Arrow | None:
        return self._by_name.get("b*")

    def pairs(self) -> list[tuple[Arrow, Arrow]]:
        return [(a, self.star(a)) for a in self.arrows if a.partner is not None and a.eps == 1]

    def restrict(self, vertices) -> "Quiver":
        """Complete subquiver on ``vertices`` (arrow ids renumbered)."""
        keep = set(vertices)
        return _renumber(
            tuple(v for v in self.vertices if v in keep),
            [a for a in self.arrows if a.tail in keep and a.head in keep],
        )

    def without(self, names) -> "Quiver":
        names = set(names)
        return _renumber(self.vertices, [a for a in self.arrows if a.name not in names])

    def with_epsilon(self, flips) -> "Quiver":
        """Flip eps on the pairs containing the arrows named in ``flips``."""
        flip_ids = set()
        for name in flips:
            a = self.arrow(name)
            flip_ids |= {a.id, a.partner}
        arrows = tuple(
            Arrow(a.id, a.name, a.tail, a.head, a.partner, -a.eps if a.id in flip_ids else a.eps)
            for a in self.arrows
        )
        return Quiver(self.vertices, arrows)

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{vertex_name(v)}";')
        for a in self.arrows:
            lines.append(
                f'  "{vertex_name(a.tail)}" -> "{vertex_name(a.head)}" '
                f'[label="{a.name}", eps="{a.eps:+d}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _renumber(vertices, arrows) -> Quiver:
    new_id = {a.id: k for k, a in enumerate(arrows)}
    out = tuple(
        Arrow(new_id[a.id], a.name, a.tail, a.head, new_id.get(a.partner), a.eps) for a in arrows
    )
    return Quiver(tuple(vertices), out)


def _doubled(vertices, edges) -> Quiver:
    arrows = []
    for tail, head, name in edges:
        k = len(arrows)
        arrows.append(Arrow(k, name, tail, head, k + 1, 1))
        arrows.append(Arrow(k + 1, name + "*", head, tail, k, -1))
    return Quiver(tuple(vertices), tuple(arrows))


def _mckay_edges(data: McKayData):
    edges = []
    for i in data.vertices:
        for j in data.vertices:
            if i < j:
                mult = data.adjacency[i][j]
                for k in range(mult):
                    suffix = f"_{k}" if mult > 1 else ""
                    edges.append((i, j, f"a{i}_{j}{suffix}"))
    return edges


def frame(data: McKayData) -> Quiver:
    """Framed McKay quiver Q: the McKay quiver plus the pair b: inf -> 0, b*: 0 -> inf.

    eps = +1 on the member of each pair with the smaller (tail, head), i.e. tail < head.
    """
    return _doubled((INF, *data.vertices), [(INF, 0, "b"), *_mckay_edges(data)])


def mckay_quiver(data: McKayData) -> Quiver:
    """Unframed McKay quiver Q_Gamma."""
    return frame(data).restrict(data.vertices)


def star_quiver(data: McKayData) -> Quiver:
    """Q* = Q minus b*."""
    return frame(data).without(["b*"])


# --- automorphisms ---------------------------------------------------------------


def diagram_automorphisms(data: McKayData) -> list[tuple[int, ...]]:
    """All vertex permutations preserving adjacency and irrep dimensions.

    A permutation is the tuple ``sigma`` with ``sigma[i]`` the image of i.
    """
    n = len(data.irrep_dims)
    adj, dims = data.adjacency, data.irrep_dims
    found = []

    def extend(prefix, used):
        i = len(prefix)
        if i == n:
            found.append(tuple(prefix))
            return
        for j in range(n):
            if j in used or dims[j] != dims[i]:
                continue
            if any(adj[i][k] != adj[j][prefix[k]] for k in range(i)):
                continue
            prefix.append(j)
            used.add(j)
            extend(prefix, used)
            used.discard(j)
            prefix.pop()

    extend([], set())
    return found


def iota_of_zero(data: McKayData, i: int) -> int:
    """Image of vertex 0 under the automorphism k -> rho_k (x) dual(rho_i), which sends i to 0."""
    if data.irrep_dims[i] != 1:
        raise NoSuchAutomorphism(f"dim rho_{i} = {data.irrep_dims[i]} != 1")
    sigma = data.twists.get(i)
    if sigma is None or sigma[i] != 0:
        raise NoSuchAutomorphism(f"no automorphism sends {i} to 0")
    return sigma[0]


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)[i] = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def dumps(data: McKayData) -> str:
    return json.dumps(data.to_json(), sort_keys=True)


def all_groups(max_m: int = 8) -> list[GroupFamily]:
    groups = [GroupFamily("cyclic", m) for m in range(2, max_m + 1)]
    groups += [GroupFamily("binary_dihedral", m) for m in range(2, max_m + 1)]
    groups += [GroupFamily(k) for k in ("E6", "E7", "E8")]
    return groups


__all__ = [
    "INF",
    "Arrow",
    "GroupFamily",
    "InvalidGroupParameter",
    "McKayData",
    "NoSuchAutomorphism",
    "Quiver",
    "all_groups",
    "build_mckay",
    "compose",
    "diagram_automorphisms",
    "frame",
    "invert",
    "iota_of_zero",
    "mckay",
    "mckay_quiver",
    "star_quiver",
]
