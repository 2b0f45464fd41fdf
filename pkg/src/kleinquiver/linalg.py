"""Linear algebra over QQ, GF(p) and floats.

Matrices are numpy arrays: dtype=object holding ``Fraction`` for QQ, int64
reduced mod p for GF(p), float64 for the numeric field. Subspaces are carried
as basis matrices whose columns span them.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

FLOAT_TOL = 1e-9


class SingularMatrix(ArithmeticError):
    pass


class Field:
    """A coefficient field. Use the module constants ``QQ``, ``RR`` or ``GF(p)``."""

    def __init__(self, name: str, p: int | None = None):
        self.name = name
        self.p = p

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Field) and (self.name, self.p) == (other.name, other.p)

    def __hash__(self):
        return hash((self.name, self.p))

    @property
    def exact(self) -> bool:
        return self.name != "RR"

    def coerce(self, x):
        if self.name == "QQ":
            return x if isinstance(x, Fraction) else Fraction(x)
        if self.name == "RR":
            return float(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def array(self, data, shape=None) -> np.ndarray:
        if self.name == "QQ":
            a = np.array(data, dtype=object)
            if shape is not None:
                a = a.reshape(shape)
            out = np.empty(a.shape, dtype=object)
            for idx, x in np.ndenumerate(a):
                out[idx] = self.coerce(x)
            return out
        if self.name == "RR":
            a = np.array(data, dtype=float)
            return a.reshape(shape) if shape is not None else a
        a = np.array([self.coerce(x) for x in np.asarray(data, dtype=object).ravel()], dtype=np.int64)
        return a.reshape(shape if shape is not None else np.shape(data))

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.name == "QQ":
            out = np.empty((rows, cols), dtype=object)
            out.fill(Fraction(0))
            return out
        if self.name == "RR":
            return np.zeros((rows, cols))
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.coerce(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        c = a @ b
        if self.p is not None:
            c %= self.p
        return c

    def add(self, a, b):
        c = a + b
        return c % self.p if self.p is not None else c

    def sub(self, a, b):
        c = a - b
        return c % self.p if self.p is not None else c

    def scale(self, s, a):
        c = self.coerce(s) * a
        return c % self.p if self.p is not None else c

    def is_zero(self, x) -> bool:
        if self.name == "RR":
            return abs(x) <= FLOAT_TOL
        return x == 0

    def is_zero_matrix(self, a: np.ndarray) -> bool:
        if a.size == 0:
            return True
        if self.name == "RR":
            return bool(np.max(np.abs(a)) <= FLOAT_TOL)
        return all(x == 0 for x in a.ravel())

    def inv(self, x):
        if self.p is not None:
            return pow(int(x), -1, self.p)
        return 1 / x

    def elements(self):
        if self.p is None:
            raise ValueError(f"{self} is infinite")
        return range(self.p)


QQ = Field("QQ")
RR = Field("RR")
_GF_CACHE: dict[int, Field] = {}


def GF(p: int) -> Field:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = Field(f"GF({p})", p)
    return _GF_CACHE[p]


def rref(a: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (exact fields only)."""
    if not field.exact:
        raise TypeError("rref is exact-only; use svd-based helpers for RR")
    m = a.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.inv(m[r, c])
        m[r] = field.scale(inv, m[r])
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = field.sub(m[i], field.scale(m[i, c], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, field: Field) -> int:
    if a.size == 0:
        return 0
    if not field.exact:
        return int(np.sum(np.linalg.svd(a, compute_uv=False) > FLOAT_TOL))
    return len(rref(a, field)[1])


def nullspace(a: np.ndarray, field: Field) -> np.ndarray:
    """Basis of {x : a x = 0} as columns."""
    rows, cols = a.shape
    if rows == 0:
        return field.identity(cols)
    if not field.exact:
        if cols == 0:
            return np.zeros((0, 0))
        _, s, vh = np.linalg.svd(a)
        r = int(np.sum(s > FLOAT_TOL))
        return vh[r:].conj().T.copy()
    m, pivots = rref(a, field)
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = field.coerce(1)
        for i, pc in enumerate(pivots):
            basis[pc, k] = field.sub(field.coerce(0), m[i, f]) if field.p else -m[i, f]
    return basis


def column_basis(a: np.ndarray, field: Field) -> np.ndarray:
    """Columns spanning the column space of ``a``, linearly independent."""
    if a.shape[1] == 0:
        return a
    if not field.exact:
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        return u[:, : int(np.sum(s > FLOAT_TOL))].copy()
    _, pivots = rref(a, field)
    return a[:, pivots]


def annihilator(basis: np.ndarray, field: Field) -> np.ndarray:
    """Rows whose common kernel is exactly the span of ``basis``."""
    n = basis.shape[0]
    if basis.shape[1] == 0:
        return field.identity(n)
    return nullspace(basis.T.copy(), field).T.copy()


def hstack(blocks: list[np.ndarray], rows: int, field: Field) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return field.zeros(rows, 0)
    return np.hstack(blocks)


def vstack(blocks: list[np.ndarray], cols: int, field: Field) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0] > 0]
    if not blocks:
        return field.zeros(0, cols)
    return np.vstack(blocks)


def inverse(a: np.ndarray, field: Field = QQ) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if not field.exact:
        return np.linalg.inv(a)
    m, pivots = rref(np.hstack([a, field.identity(n)]), field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return m[:, n:].copy()


def determinant(a: np.ndarray, field: Field = QQ):
    n = a.shape[0]
    m = a.copy()
    det = field.coerce(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i, c] != 0), None)
        if piv is None:
            return field.coerce(0)
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
            det = -det
        det = det * m[c, c]
        inv = field.inv(m[c, c])
        for i in range(c + 1, n):
            if m[i, c] != 0:
                m[i] = field.sub(m[i], field.scale(m[i, c] * inv, m[c]))
    return field.coerce(det)


def reduce_mod_p(a: np.ndarray, p: int) -> np.ndarray | None:
    """Reduce a rational matrix mod p; None if a denominator is divisible by p."""
    out = np.zeros(a.shape, dtype=np.int64)
    for idx, x in np.ndenumerate(a):
        x = Fraction(x)
        if x.denominator % p == 0:
            return None
        out[idx] = (x.numerator * pow(x.denominator, -1, p)) % p
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=float).reshape(a.shape)
