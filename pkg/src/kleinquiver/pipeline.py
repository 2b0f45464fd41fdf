"""Certificates of non-emptiness for the varieties M_{theta_I}(1, v) and M_{A_I}(1, n_I).

A certificate is an exact rational A-module (b* = 0, moment residual zero)
together with an exact stability verdict. Sources, in order of preference:

1. the trivial module when v = 0;
2. monomial-ideal modules (cyclic groups only);
3. Levenberg-Marquardt on the moment map followed by exact completion.

Exact completion: with the eps = +1 arrows fixed, the relations are linear in
the eps = -1 arrows. The + arrows are rounded to rationals, the free
coordinates of the exact kernel are read off the numeric point, and the rest
is solved exactly. When rounding pushes the point off the variety, the + entries
are instead pinned to simple rationals one at a time, re-solving the other
coordinates after each pin, and the completion is retried.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares

from . import linalg
from .cornered import assemble_AI_module, split_cornered
from .linalg import GF, QQ, RR
from .mckay import INF, McKayData, Quiver, frame, mckay
from .oracle import brute_force_stability, enumerate_colored_partitions, partition_to_rep
from .rep import (
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    Representation,
    framing_closure,
    is_A_module,
    pad_with_simples,
    random_rep,
    residual_norm,
    restrict_jI,
    stability_verdict,
    subrepresentation,
    zero_rep,
)
from .stability import (
    DimVector,
    PreconditionError,
    Stability,
    eta_I,
    padded_start,
    theta_I,
    outgoing_bound_violations,
    vprime_construction,
)

SCHEMA_VERSION = 1
RESIDUAL_TOL = 1e-10
DEFAULT_RESTARTS = 64
DENOMINATOR_LADDER = (1, 10, 100, 1000, 10**4, 10**6, None)

PROVENANCE_TRIVIAL = "trivial"
PROVENANCE_ORACLE = "oracle"
PROVENANCE_NUMERIC = "numeric_then_rationalized"
PROVENANCE_PADDED = "padded"


class RationalizationFailed(RuntimeError):
    pass


class GateFailure(RuntimeError):
    pass


def format_residual(x: float) -> str:
    """Coarse residual for reports; last-bit float noise must not change the bytes."""
    if x < 1e-12:
        return "<1e-12"
    return f"{x:.1e}"


def _meets(verdict: str, require: str) -> bool:
    return verdict == STABLE if require == STABLE else verdict in (STABLE, SEMISTABLE)


# --- certificates -------------------------------------------------------------------


@dataclass(eq=False)
class Certificate:
    rep: Representation
    target: str
    theta: Stability
    residual_bound: object
    verdict: str
    provenance: str
    notes: dict = field(default_factory=dict)

    @property
    def dims(self) -> DimVector:
        return self.rep.dims

    @property
    def exact(self) -> bool:
        return self.rep.field is QQ

    def check(self) -> bool:
        """Re-verify from scratch: exact zero residual, b* = 0 and the claimed verdict."""
        if not self.exact or not is_A_module(self.rep):
            return False
        return stability_verdict(self.rep, self.theta) == self.verdict and self.verdict != UNSTABLE

    def to_json(self, include_rep: bool = True) -> dict:
        out = {
            "target": self.target,
            "dims": self.rep.dims.to_json(),
            "theta": self.theta.to_json(),
            "residual_bound": str(self.residual_bound) if self.exact else format_residual(self.residual_bound),
            "verdict": self.verdict,
            "provenance": self.provenance,
            "exact": self.exact,
            "notes": self.notes,
        }
        if include_rep:
            out["rep"] = self.rep.to_json()
        return out


def verify_exact(rep: Representation, theta: Stability, provenance: str, require=SEMISTABLE, notes=None):
    """Certificate if ``rep`` is an exact A-module meeting ``require``; otherwise None."""
    if rep.field is not QQ or not is_A_module(rep):
        return None
    verdict = stability_verdict(rep, theta)
    if not _meets(verdict, require):
        return None
    return Certificate(rep, "quiver_variety", theta, Fraction(0), verdict, provenance, dict(notes or {}))


# --- oracle gate ------------------------------------------------------------------------


@lru_cache(maxsize=None)
def oracle_gate(samples: int = 60, seed: int = 20240607) -> dict:
    """Agreement of the linear-algebra stability tests with brute force on random GF(p) modules."""
    rng = np.random.default_rng(seed)
    agree = 0
    for _ in range(samples):
        label = ("A1", "A2", "D4")[int(rng.integers(3))]
        data = mckay(label)
        q = frame(data)
        n = len(data.vertices)
        while True:
            vals = rng.integers(0, 3, size=n)
            if 1 <= vals.sum() <= 4:
                break
        dims = DimVector(tuple(int(x) for x in vals), 1)
        rep = random_rep(q, dims, rng, GF(int(rng.choice([2, 3]))), density=float(rng.random()))
        size = int(rng.integers(1, n + 1))
        I = tuple(sorted(int(x) for x in rng.choice(n, size=size, replace=False)))
        theta = theta_I(data, I, dims)
        agree += stability_verdict(rep, theta) == brute_force_stability(rep, theta)
    result = {"samples": samples, "agree": agree, "passed": agree == samples}
    if not result["passed"]:
        raise GateFailure(f"stability tests disagree with brute force on {samples - agree} cases")
    return result


# --- numeric solver -------------------------------------------------------------------------


@dataclass
class SolverResult:
    rep: Representation | None
    residual: float
    attempts: int
    status: str  # "found" | "not_found"
    verdict: str | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"


class _MomentProblem:
    """Real unknowns: every arrow matrix except b* (held at zero)."""

    def __init__(self, quiver: Quiver, dims: DimVector):
        self.quiver = quiver
        self.dims = dims
        self.slots = []
        offset = 0
        for a in quiver.arrows:
            if a.name == "b*":
                continue
            shape = (dims[a.head], dims[a.tail])
            size = shape[0] * shape[1]
            self.slots.append((a, offset, shape))
            offset += size
        self.n = offset
        self.slot_of = {a.id: (off, shape) for a, off, shape in self.slots}
        self.terms = []
        for v in quiver.vertices:
            for a in quiver.in_arrows(v):
                if a.partner is None or a.name == "b" or a.name == "b*":
                    continue
                self.terms.append((v, a.eps, a.id, a.partner))
        self.row_offsets = {}
        r = 0
        for v in quiver.vertices:
            if v == INF:
                continue
            self.row_offsets[v] = r
            r += dims[v] ** 2
        self.m = r

    def unpack(self, x: np.ndarray) -> dict:
        maps = {}
        for a in self.quiver.arrows:
            if a.id in self.slot_of:
                off, shape = self.slot_of[a.id]
                maps[a.id] = x[off : off + shape[0] * shape[1]].reshape(shape)
            else:
                maps[a.id] = np.zeros((self.dims[a.head], self.dims[a.tail]))
        return maps

    def residual(self, x: np.ndarray) -> np.ndarray:
        maps = self.unpack(x)
        out = np.zeros(max(self.m, self.n))
        for v, eps, a, star in self.terms:
            d = self.dims[v]
            if d == 0:
                continue
            off = self.row_offsets[v]
            out[off : off + d * d] += eps * (maps[a] @ maps[star]).ravel()
        return out

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        maps = self.unpack(x)
        jac = np.zeros((max(self.m, self.n), self.n))
        for v, eps, a, star in self.terms:
            d = self.dims[v]
            if d == 0:
                continue
            off = self.row_offsets[v]
            A, B = maps[a], maps[star]
            k = A.shape[1]
            if k == 0:
                continue
            oa, _ = self.slot_of[a]
            ob, _ = self.slot_of[star]
            jac[off : off + d * d, oa : oa + d * k] += eps * np.kron(np.eye(d), B.T)
            jac[off : off + d * d, ob : ob + k * d] += eps * np.kron(A, np.eye(d))
        return jac

    def rep(self, x: np.ndarray, group=None) -> Representation:
        maps = {k: np.array(v, dtype=float) for k, v in self.unpack(x).items()}
        return Representation(self.quiver, self.dims, maps, RR, group)


def _one_restart(problem: _MomentProblem, theta: Stability, require: str, seed_seq, group):
    rng = np.random.default_rng(seed_seq)
    x0 = rng.standard_normal(problem.n)
    if problem.n == 0:
        rep = problem.rep(x0, group)
        return rep, 0.0
    fit = least_squares(
        problem.residual,
        x0,
        jac=problem.jacobian,
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=400,
    )
    rep = problem.rep(fit.x, group)
    return rep, residual_norm(rep)


def solve_moment_map(
    quiver: Quiver,
    v: DimVector,
    theta: Stability,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    require: str = STABLE,
    threads: int = 1,
    group: str | None = None,
) -> SolverResult:
    """Random-start least squares for mu = 0 with b* = 0, accepting points with the required verdict.

    Restarts are scanned in index order, so the answer does not depend on ``threads``.
    """
    if v.inf != 1:
        raise PreconditionError("solver needs a framed dimension vector with v_inf = 1")
    problem = _MomentProblem(quiver, v)
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    best = np.inf
    batch = max(1, threads)
    pool = ThreadPoolExecutor(max_workers=batch) if batch > 1 else None
    try:
        for start in range(0, restarts, batch):
            chunk = seeds[start : start + batch]
            if pool is None:
                results = [_one_restart(problem, theta, require, s, group) for s in chunk]
            else:
                results = list(pool.map(lambda s: _one_restart(problem, theta, require, s, group), chunk))
            for offset, (rep, res) in enumerate(results):
                best = min(best, res)
                if res > RESIDUAL_TOL:
                    continue
                verdict = stability_verdict(rep, theta)
                if _meets(verdict, require):
                    return SolverResult(rep, res, start + offset + 1, "found", verdict)
    finally:
        if pool is not None:
            pool.shutdown()
    return SolverResult(None, float(best), restarts, "not_found")


# --- exact completion -------------------------------------------------------------------------


def _rationalize(x: float, limit: int | None) -> Fraction:
    f = Fraction(float(x))
    return f if limit is None else f.limit_denominator(limit)


def _linear_system(quiver: Quiver, dims: DimVector, plus: dict):
    """Matrix of the relations as a linear map in the entries of the eps = -1 arrows (b* excluded)."""
    unknowns = []
    for a in quiver.arrows:
        if a.eps == -1 and a.name != "b*":
            for i in range(dims[a.head]):
                for j in range(dims[a.tail]):
                    unknowns.append((a.id, i, j))
    col = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for v in quiver.vertices:
        if v == INF:
            continue
        d = dims[v]
        block = [[Fraction(0)] * len(unknowns) for _ in range(d * d)]
        for a in quiver.in_arrows(v):
            if a.partner is None or a.name in ("b", "b*"):
                continue
            if a.eps == 1:
                # + M_a X_{a*}: entry (p, q) += M_a[p, k] X[k, q]
                M = plus[a.id]
                star = a.partner
                for p in range(d):
                    for q in range(d):
                        for k in range(M.shape[1]):
                            if M[p, k]:
                                block[p * d + q][col[(star, k, q)]] += M[p, k]
            else:
                # - X_a M_{a*}: entry (p, q) -= X[p, k] M_{a*}[k, q]
                M = plus[a.partner]
                for p in range(d):
                    for q in range(d):
                        for k in range(M.shape[0]):
                            if M[k, q]:
                                block[p * d + q][col[(a.id, p, k)]] -= M[k, q]
        rows.extend(block)
    matrix = QQ.array(rows, (len(rows), len(unknowns))) if rows and unknowns else QQ.zeros(len(rows), len(unknowns))
    return matrix, unknowns


def _numeric_nullity(quiver: Quiver, dims: DimVector, rep: Representation) -> int:
    plus = {a.id: rep.maps[a.id] for a in quiver.arrows if a.eps == 1}
    matrix, unknowns = _linear_system(quiver, dims, {k: QQ.array(np.asarray(m, float).tolist(), m.shape) if m.size else QQ.zeros(*m.shape) for k, m in plus.items()})
    if not unknowns:
        return 0
    if matrix.shape[0] == 0:
        return len(unknowns)
    s = np.linalg.svd(linalg.to_float(matrix), compute_uv=False)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    return len(unknowns) - int(np.sum(s > 1e-8 * scale))


def rationalize_and_verify(
    rep: Representation,
    theta: Stability,
    require: str = STABLE,
    ladder=DENOMINATOR_LADDER,
) -> Certificate:
    """Turn a numeric solution into an exact certificate, or raise RationalizationFailed."""
    if rep.field is QQ:
        cert = verify_exact(rep, theta, PROVENANCE_ORACLE, require)
        if cert is None:
            raise RationalizationFailed("exact input does not verify")
        return cert
    res = residual_norm(rep)
    if res > RESIDUAL_TOL:
        raise PreconditionError(f"numeric residual {res:.3g} exceeds {RESIDUAL_TOL}")
    cert = _complete_exactly(rep, theta, require, ladder, res)
    if cert is not None:
        return cert
    pinned = _pin_plus_side(rep, theta, require)
    if pinned is not None:
        cert = _complete_exactly(pinned[0], theta, require, ladder, res, pinned[1])
        if cert is not None:
            return cert
    raise RationalizationFailed("no rational completion kept the required stability")


def _complete_exactly(rep: Representation, theta: Stability, require: str, ladder, res: float, pinned: int = 0):
    quiver, dims = rep.quiver, rep.dims
    numeric_nullity = _numeric_nullity(quiver, dims, rep)
    for limit in ladder:
        plus = {}
        for a in quiver.arrows:
            if a.eps == 1:
                m = rep.maps[a.id]
                plus[a.id] = (
                    QQ.array([_rationalize(x, limit) for x in m.ravel()], m.shape) if m.size else QQ.zeros(*m.shape)
                )
        matrix, unknowns = _linear_system(quiver, dims, plus)
        if unknowns:
            reduced, pivots = linalg.rref(matrix, QQ) if matrix.shape[0] else (matrix, [])
            free = [c for c in range(len(unknowns)) if c not in pivots]
            values = [Fraction(0)] * len(unknowns)
            for c in free:
                a_id, i, j = unknowns[c]
                values[c] = _rationalize(rep.maps[a_id][i, j], limit)
            for r, pc in enumerate(pivots):
                values[pc] = -sum((reduced[r, c] * values[c] for c in free), Fraction(0))
        else:
            free, values = [], []
        maps = dict(plus)
        for a in quiver.arrows:
            if a.eps == -1:
                maps[a.id] = QQ.zeros(dims[a.head], dims[a.tail])
        for (a_id, i, j), val in zip(unknowns, values):
            maps[a_id][i, j] = val
        exact = Representation(quiver, dims, maps, QQ, rep.group)
        notes = {
            "denominator_limit": limit if limit is not None else "exact",
            "kernel_dim": len(free),
            "numeric_kernel_dim": numeric_nullity,
            "numeric_residual": format_residual(res),
            "pinned_entries": pinned,
        }
        cert = verify_exact(exact, theta, PROVENANCE_NUMERIC, require, notes)
        if cert is not None:
            return cert
    return None


PIN_LADDER = (1, 2, 3, 4, 6, 10, 100)


def _pin_plus_side(rep: Representation, theta: Stability, require: str):
    """Move the eps = +1 entries onto simple rationals one at a time, re-solving the rest.

    Rounding all of them at once usually leaves the point off the locus where the
    linear system for the eps = -1 arrows has a kernel. Pinning entry by entry and
    letting the other coordinates follow keeps the point on mu = 0. Returns the
    polished numeric module and the number of pinned entries, or None.
    """
    problem = _MomentProblem(rep.quiver, rep.dims)
    x = np.zeros(problem.n)
    for a, off, shape in problem.slots:
        x[off : off + shape[0] * shape[1]] = np.asarray(rep.maps[a.id], dtype=float).ravel()
    plus = [off + k for a, off, shape in problem.slots if a.eps == 1 for k in range(shape[0] * shape[1])]
    pinned: dict[int, float] = {}

    def distance(i):
        return abs(x[i] - float(Fraction(float(x[i])).limit_denominator(PIN_LADDER[-1])))

    while len(pinned) < len(plus):
        target = min((i for i in plus if i not in pinned), key=lambda i: (distance(i), i))
        for limit in PIN_LADDER:
            trial = {**pinned, target: float(_rationalize(x[target], limit))}
            y = _resolve_with_pins(problem, x, trial)
            candidate = problem.rep(y, rep.group)
            if residual_norm(candidate) <= RESIDUAL_TOL and _meets(stability_verdict(candidate, theta), require):
                x, pinned = y, trial
                break
        else:
            return None
    return problem.rep(x, rep.group), len(pinned)


def _resolve_with_pins(problem: _MomentProblem, x: np.ndarray, pins: dict) -> np.ndarray:
    idx = np.array(sorted(pins), dtype=int)
    vals = np.array([pins[i] for i in sorted(pins)])
    free = np.array([i for i in range(problem.n) if i not in pins], dtype=int)
    y = x.copy()
    y[idx] = vals
    if free.size == 0:
        return y

    def full(z):
        w = y.copy()
        w[free] = z
        return w

    fit = least_squares(
        lambda z: problem.residual(full(z)),
        y[free],
        jac=lambda z: problem.jacobian(full(z))[:, free],
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=200,
    )
    return full(fit.x)


# --- certificate search ---------------------------------------------------------------------


@dataclass
class Attempt:
    dims: DimVector
    status: str  # stable | semistable | pruned_outgoing_bound | empty | unknown
    detail: str = ""

    def to_json(self) -> dict:
        return {"dims": self.dims.to_json(), "status": self.status, "detail": self.detail}


@dataclass
class SearchSettings:
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    threads: int = 1
    use_oracle: bool = True


def _cyclic_m(data: McKayData) -> int | None:
    return data.group.m if data.group.kind == "cyclic" else None


def oracle_certificate(data: McKayData, theta: Stability, dims: DimVector, require: str):
    """First monomial-ideal module of content ``dims`` with the required verdict.

    Returns (certificate or None, number of partitions with that content).
    """
    m = _cyclic_m(data)
    if m is None:
        return None, None
    parts = enumerate_colored_partitions(m, dims.values)
    quiver = frame(data)
    for p in parts:
        rep = partition_to_rep(p, quiver)
        cert = verify_exact(rep, theta, PROVENANCE_ORACLE, require, {"partition": list(p.partition)})
        if cert is not None:
            return cert, len(parts)
    return None, len(parts)


def find_certificate(
    data: McKayData,
    theta: Stability,
    dims: DimVector,
    require: str,
    settings: SearchSettings,
    solver_log: list | None = None,
):
    """Exact certificate at ``dims`` with the required verdict, plus a status string."""
    oracle_gate()
    quiver = frame(data)
    label = data.group.dynkin
    if sum(dims.values) == 0:
        rep = zero_rep(quiver, dims, QQ, label)
        cert = verify_exact(rep, theta, PROVENANCE_TRIVIAL, require)
        return cert, (cert.verdict if cert else "unknown")
    count = None
    if settings.use_oracle:
        cert, count = oracle_certificate(data, theta, dims, require)
        if cert is not None:
            return cert, cert.verdict
    if require == STABLE and count == 0:
        # stable => generated at inf => a point of the Hilbert scheme, which then has a monomial fixed point
        return None, "empty"
    result = solve_moment_map(
        quiver, dims, theta, settings.seed, settings.restarts, require, settings.threads, label
    )
    if solver_log is not None:
        solver_log.append(
            {
                "dims": dims.to_json(),
                "status": result.status,
                "residual": format_residual(result.residual),
                "attempts": result.attempts,
            }
        )
    if not result.found:
        return None, "unknown"
    try:
        cert = rationalize_and_verify(result.rep, theta, require)
    except RationalizationFailed:
        return None, "unknown"
    return cert, cert.verdict


@dataclass
class VTildeResult:
    v_tilde: DimVector
    witness: Certificate
    search_log: list
    maximal: bool = True

    def padded(self, v: DimVector) -> Representation:
        extra = {k: v[k] - self.v_tilde[k] for k in range(len(v.values))}
        return pad_with_simples(self.witness.rep, extra)


@dataclass
class VTildeUnknown:
    search_log: list
    candidate: VTildeResult | None = None


def candidate_vectors(data: McKayData, I, v: DimVector) -> list[DimVector]:
    """w <= v with w = v on I, by decreasing total and then lexicographically decreasing."""
    I = set(I)
    ranges = [range(v[k], -1, -1) if k not in I else (v[k],) for k in data.vertices]
    out = [DimVector(tuple(w), 1) for w in itertools.product(*ranges)]
    out.sort(key=lambda w: (-sum(w.values), tuple(-x for x in w.values)))
    return out


def find_v_tilde(data: McKayData, I, v: DimVector, settings: SearchSettings | None = None, solver_log=None):
    """Largest tested w <= v (w = v on I) carrying a theta_I-stable certificate."""
    settings = settings or SearchSettings()
    I = tuple(sorted(set(I)))
    theta = theta_I(data, I, v)
    log: list[Attempt] = []
    inconclusive = False
    for w in candidate_vectors(data, I, v):
        bad = outgoing_bound_violations(data, I, w)
        if bad:
            log.append(Attempt(w, "pruned_outgoing_bound", f"violated at {bad}"))
            continue
        cert, status = find_certificate(data, theta, w, STABLE, settings, solver_log)
        if cert is not None:
            log.append(Attempt(w, STABLE, cert.provenance))
            result = VTildeResult(w, cert, log, maximal=not inconclusive)
            return result if not inconclusive else VTildeUnknown(log, result)
        log.append(Attempt(w, status))
        if status != "empty":
            inconclusive = True
    return VTildeUnknown(log, None)


def inf_summand_bound_check(cert: Certificate, v_tilde: DimVector) -> bool | None:
    """dims of the summand through inf are <= v_tilde; None when that summand is not stable."""
    sub = subrepresentation(cert.rep, framing_closure(cert.rep))
    I = [i for i in range(len(sub.dims.values)) if cert.theta[i] > 0]
    if sum(sub.dims[i] for i in I) != sum(cert.dims[i] for i in I):
        return None
    weights = {i: cert.theta[i] for i in range(len(sub.dims.values))}
    theta = Stability(-sum(sub.dims[i] for i in I), weights)
    if stability_verdict(sub, theta) != STABLE:
        return None
    return sub.dims <= v_tilde


# --- full run ----------------------------------------------------------------------------------


def _n_vector(data: McKayData, I, n_I) -> dict:
    I = tuple(sorted(set(I)))
    if isinstance(n_I, dict):
        return {i: int(n_I[i]) for i in I}
    n_I = list(n_I)
    if len(n_I) != len(I):
        raise ValueError("n_I must have one entry per vertex of I")
    return dict(zip(I, (int(x) for x in n_I)))


def run_pipeline(group, I, n_I, settings: SearchSettings | None = None) -> dict:
    settings = settings or SearchSettings()
    data = group if isinstance(group, McKayData) else mckay(group)
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise ValueError("I must be nonempty")
    n = _n_vector(data, I, n_I)
    violations: list[str] = []
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "group": data.group.dynkin,
        "I": list(I),
        "n_I": [n[i] for i in I],
        "seed": settings.seed,
        "restarts": settings.restarts,
    }
    report["oracle_gate"] = oracle_gate()

    start = padded_start(data, I, n)
    vp = vprime_construction(data, I, n, start)
    v = vp.vprime
    theta = theta_I(data, I, v)
    eta = eta_I(I, n)
    report["theta_I"] = theta.to_json()
    report["eta_I"] = eta.to_json()
    report["v_prime"] = {"dims": v.to_json(), "N": vp.N, "k_prime": list(vp.k_prime)}

    solver_log: list = []
    stable_certs: list[Certificate] = []

    direct, status = find_certificate(data, theta, v, SEMISTABLE, settings, solver_log)
    if direct is not None and direct.verdict == STABLE:
        stable_certs.append(direct)
    report["direct_certificate"] = direct.to_json() if direct else {"status": status}

    vt = find_v_tilde(data, I, v, settings, solver_log)
    vt_result = vt if isinstance(vt, VTildeResult) else vt.candidate
    report["v_tilde"] = {
        "status": "certified" if isinstance(vt, VTildeResult) else "unknown",
        "search_log": [a.to_json() for a in vt.search_log],
    }
    semistable = direct
    if vt_result is not None:
        stable_certs.append(vt_result.witness)
        report["v_tilde"].update(
            {"dims": vt_result.v_tilde.to_json(), "witness": vt_result.witness.to_json(), "maximal": vt_result.maximal}
        )
        if not (vt_result.v_tilde <= v) or any(vt_result.v_tilde[i] != v[i] for i in I):
            violations.append("v_tilde is not below v' with equality on I")
        padded = verify_exact(vt_result.padded(v), theta, PROVENANCE_PADDED, SEMISTABLE)
        report["padding_round_trip"] = {"semistable": padded is not None}
        if padded is None:
            violations.append("padding the v_tilde witness lost semistability")
        else:
            semistable = semistable or padded
            bound = inf_summand_bound_check(padded, vt_result.v_tilde)
            report["inf_summand_bound"] = {"padded": bound}
            if bound is False:
                violations.append("summand through inf exceeds v_tilde on the padded certificate")
        if direct is not None:
            bound = inf_summand_bound_check(direct, vt_result.v_tilde)
            report["inf_summand_bound"]["direct"] = "skipped" if bound is None else bound
            if bound is False and vt_result.maximal:
                violations.append("summand through inf exceeds v_tilde on the direct certificate")

    bounds = {}
    for cert in stable_certs:
        bad = outgoing_bound_violations(data, I, cert.dims)
        bounds[str(cert.dims)] = bad
        if bad:
            violations.append(f"stable certificate at {cert.dims} violates the outgoing-sum bound at {bad}")
    report["outgoing_bound_checks"] = bounds

    restriction = None
    if semistable is not None:
        jI = restrict_jI(semistable.rep, I)
        dims_ok = all(jI.dims[i] == n[i] for i in I) and jI.dims[INF] == 1
        stable = jI.is_stable(eta)
        reassembled = assemble_AI_module(split_cornered(jI))
        restriction = {
            "dims": {("inf" if k == INF else str(k)): d for k, d in jI.dims.items()},
            "dims_match_n_I": dims_ok,
            "eta_stable": stable,
            "reassembled_eta_stable": reassembled.is_stable(eta),
        }
        if not (dims_ok and stable):
            violations.append("restriction of the semistable certificate is not an eta_I-stable module of dim (1, n_I)")
    report["restriction"] = restriction

    report["numeric_crosscheck"] = _numeric_crosscheck(data, theta, vt_result, settings)
    report["solver_log"] = solver_log

    quiver_side = semistable is not None
    ai_side = bool(restriction and restriction["eta_stable"])
    report["nonemptiness"] = {
        "quiver_variety": "nonempty" if quiver_side else "unknown",
        "moduli_A_I": "nonempty" if ai_side else "unknown",
        "equivalence_consistent": quiver_side == ai_side,
    }
    if quiver_side != ai_side:
        violations.append("non-emptiness of the two moduli problems disagrees")
    for cert in [c for c in (direct, semistable) if c is not None] + stable_certs:
        if not cert.check():
            violations.append(f"certificate at {cert.dims} failed re-verification")
    report["invariant_violations"] = violations
    return report


def _numeric_crosscheck(data: McKayData, theta: Stability, vt: VTildeResult | None, settings: SearchSettings):
    """Run the solver at v_tilde even when the oracle already answered, and complete it exactly."""
    if vt is None or sum(vt.v_tilde.values) == 0:
        return None
    result = solve_moment_map(
        frame(data), vt.v_tilde, theta, settings.seed, settings.restarts, STABLE, settings.threads, data.group.dynkin
    )
    out = {
        "dims": vt.v_tilde.to_json(),
        "status": result.status,
        "residual": format_residual(result.residual),
        "residual_within_tolerance": result.found and result.residual <= RESIDUAL_TOL,
        "attempts": result.attempts,
    }
    if result.found:
        try:
            cert = rationalize_and_verify(result.rep, theta, STABLE)
            out["rationalized"] = True
            out["verdict"] = cert.verdict
        except RationalizationFailed:
            out["rationalized"] = False
    return out
