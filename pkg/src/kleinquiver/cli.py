"""Command-line entry point: ``kleinquiver <command> <action> [options]``.

Exit codes: 0 success, 1 usage error, 2 invariant violation, 3 resource guard.
Settings are resolved as flags > environment (KQ_SEED, KQ_THREADS) > config file > defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import cornered, mckay as mk, oracle, pipeline, rep as rp, stability as st

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    group: str | None = None
    I: list[int] = field(default_factory=list)
    nI: list[int] = field(default_factory=list)
    seed: int = 0
    restarts: int = pipeline.DEFAULT_RESTARTS
    threads: int = 1
    cap: int = cornered.DEFAULT_CAP
    output: str | None = None
    verbosity: int = 0

    @classmethod
    def resolve(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = cls()
        if getattr(args, "config", None):
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")
            for k, val in data.items():
                setattr(cfg, k, _coerce(k, val))
        for env, key in (("KQ_SEED", "seed"), ("KQ_THREADS", "threads")):
            if os.environ.get(env):
                setattr(cfg, key, int(os.environ[env]))
        for f in fields(cls):
            val = getattr(args, f.name, None)
            if val is not None:
                setattr(cfg, f.name, _coerce(f.name, val))
        return cfg


def _coerce(key, val):
    if key in ("I", "nI"):
        return _int_list(val) if isinstance(val, str) else [int(x) for x in val]
    if key in ("seed", "restarts", "threads", "cap", "verbosity"):
        return int(val)
    return val


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _emit(payload, cfg: RunConfig | None = None, fmt: str = "json"):
    if fmt == "json":
        if isinstance(payload, dict):
            payload = {"schema_version": SCHEMA_VERSION, **payload}
        text = json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"
    else:
        text = payload
    path = cfg.output if cfg is not None else None
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(cfg: RunConfig, *keys):
    missing = [k for k in keys if not getattr(cfg, k)]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + k for k in missing)}")


def _data(cfg: RunConfig) -> mk.McKayData:
    _need(cfg, "group")
    try:
        return mk.mckay(cfg.group)
    except (mk.InvalidGroupParameter, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# --- handlers -------------------------------------------------------------------------


def cmd_mckay(args, cfg):
    data = _data(cfg)
    if args.action == "show":
        if args.format == "text":
            lines = [f"group {data.group.dynkin} order {data.group.order}", f"delta {data.delta}"]
            lines += [" ".join(str(x) for x in row) for row in data.adjacency]
            _emit("\n".join(lines) + "\n", cfg, "text")
        else:
            _emit({"mckay": data.to_json(), "delta": list(data.delta)}, cfg)
    else:
        q = {"Q": mk.frame, "Q_Gamma": mk.mckay_quiver, "Q_star": mk.star_quiver}[args.which](data)
        _emit(q.to_dot(args.which), cfg, "text")
    return EXIT_OK


def cmd_stability(args, cfg):
    data = _data(cfg)
    if args.action == "cartan-check":
        K = _int_list(args.K) if args.K else None
        subsets = [tuple(K)] if K is not None else _proper_subsets(data)
        out, ok = [], True
        for sub in subsets:
            for block in st.cartan_blocks(data, sub):
                good = st.cartan_inverse_nonneg(block)
                ok &= good
                out.append({"vertices": list(block.vertex_subset), "nonnegative_inverse": good})
        _emit({"group": data.group.dynkin, "blocks": out, "all_nonnegative": ok}, cfg)
        return EXIT_OK if ok else EXIT_INVARIANT
    _need(cfg, "I")
    if args.action == "theta-i":
        v = st.DimVector(tuple(_int_list(args.v)), 1)
        theta = st.theta_I(data, cfg.I, v)
        _emit({"theta": theta.to_json(), "pairing": str(theta.pair(v))}, cfg)
        return EXIT_OK
    _need(cfg, "nI")
    start = st.DimVector(tuple(_int_list(args.v)), 1) if args.v else st.padded_start(data, cfg.I, cfg.nI)
    vp = st.vprime_construction(data, cfg.I, cfg.nI, start)
    ok = st.in_V(data, cfg.I, cfg.nI, vp.vprime) and vp.vprime >= start
    _emit(
        {
            "vprime": vp.vprime.to_json(),
            "N": vp.N,
            "k_prime": list(vp.k_prime),
            "in_V": ok,
            "text": str(vp.vprime),
        },
        cfg,
    )
    return EXIT_OK if ok else EXIT_INVARIANT


def _proper_subsets(data):
    import itertools

    verts = list(data.vertices)
    return [s for k in range(1, len(verts)) for s in itertools.combinations(verts, k)]


def cmd_algebra(args, cfg):
    data = _data(cfg)
    alg = cornered.truncated_basis(args.kind, data, cfg.I or None, cfg.cap)
    table = alg.degree_table()
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["degree", "dim", "cumulative"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(table)
        _emit(buf.getvalue(), cfg, "text")
    else:
        _emit({"group": data.group.dynkin, "kind": args.kind, "I": cfg.I, "cap": cfg.cap, "degrees": table}, cfg)
    return EXIT_OK


def _load_rep(path: str) -> rp.Representation:
    with open(path) as fh:
        data = json.load(fh)
    if "arrows" not in data and isinstance(data.get("rep"), dict):
        data = data["rep"]
    try:
        return rp.Representation.from_json(data)
    except KeyError as exc:
        raise UsageError(f"representation JSON is missing {exc}") from exc


def cmd_rep(args, cfg):
    rep = _load_rep(args.file)
    if args.action == "check":
        residual = rp.moment_residual(rep)
        zero = all(rep.field.is_zero_matrix(m) for m in residual.values())
        _emit(
            {
                "dims": rep.dims.to_json(),
                "field": rep.field.name,
                "pi_module": zero,
                "a_module": rp.is_A_module(rep),
                "residual_norm": rp.residual_norm(rep),
            },
            cfg,
        )
        return EXIT_OK if zero or not args.strict else EXIT_INVARIANT
    data = mk.mckay(rep.group) if rep.group else None
    if data is None:
        raise UsageError("representation JSON lacks a group label")
    theta = st.theta_I(data, cfg.I, rep.dims) if cfg.I else st.generic_theta(data, rep.dims)
    out = {"theta": theta.to_json(), "verdict": rp.stability_verdict(rep, theta)}
    if args.brute_force:
        reduced = rep if rep.field.p in (2, 3) else rp.reduce_mod_p(rep, args.prime)
        out["brute_force"] = oracle.brute_force_stability(reduced, theta) if reduced is not None else "skipped"
    _emit(out, cfg)
    if args.brute_force and out["brute_force"] not in ("skipped", out["verdict"]):
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_oracle(args, cfg):
    if args.action == "count":
        v = _int_list(args.v)
        parts = oracle.enumerate_colored_partitions(args.m, v)
        if args.format == "text":
            _emit(f"{len(parts)}\n", cfg, "text")
        else:
            _emit({"m": args.m, "v": v, "count": len(parts), "partitions": [list(p.partition) for p in parts]}, cfg)
        return EXIT_OK
    cp = oracle.ColoredPartition(tuple(_int_list(args.partition)), args.m)
    rep = oracle.partition_to_rep(cp)
    ok = rp.is_A_module(rep)
    _emit({"partition": list(cp.partition), "content": list(cp.content.values), "rep": rep.to_json(), "flat": ok}, cfg)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_pipeline(args, cfg):
    _need(cfg, "group", "I")
    if not cfg.nI:
        raise UsageError("missing required option: --nI")
    settings = pipeline.SearchSettings(seed=cfg.seed, restarts=cfg.restarts, threads=cfg.threads)
    report = pipeline.run_pipeline(cfg.group, cfg.I, cfg.nI, settings)
    _emit(report, cfg)
    return EXIT_INVARIANT if report["invariant_violations"] else EXIT_OK


# --- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="TOML file with RunConfig keys")
    common.add_argument("--group", help="A<m-1> (Z/m), D<m+2> (binary dihedral of order 4m), E6, E7, E8")
    common.add_argument("--I", help="comma-separated vertices")
    common.add_argument("--nI", help="comma-separated dimensions on I")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--cap", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--json", dest="output", help="write output to this file")
    common.add_argument("-v", "--verbose", dest="verbosity", action="count")

    parser = _Parser(prog="kleinquiver", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mckay", parents=[common])
    p.add_argument("action", choices=["show", "dot"])
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--which", choices=["Q", "Q_Gamma", "Q_star"], default="Q")
    p.set_defaults(handler=cmd_mckay)

    p = sub.add_parser("stability", parents=[common])
    p.add_argument("action", choices=["theta-i", "vprime", "cartan-check"])
    p.add_argument("--v", default="", help="comma-separated unframed dimensions")
    p.add_argument("--K", default="", help="vertex subset for cartan-check (default: every proper subset)")
    p.set_defaults(handler=cmd_stability)

    p = sub.add_parser("algebra", parents=[common])
    p.add_argument("action", choices=["basis"])
    p.add_argument("--kind", choices=list(cornered.KINDS), default="B")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=cmd_algebra)

    p = sub.add_parser("rep", parents=[common])
    p.add_argument("action", choices=["check", "stability"])
    p.add_argument("--file", required=True, help="representation JSON")
    p.add_argument("--strict", action="store_true", help="exit 2 when the relations fail")
    p.add_argument("--brute-force", action="store_true", help="also run the finite-field oracle")
    p.add_argument("--prime", type=int, default=3)
    p.set_defaults(handler=cmd_rep)

    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("action", choices=["count", "certify"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--v", default="")
    p.add_argument("--partition", default="")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("pipeline", parents=[common])
    p.add_argument("action", choices=["run"])
    p.set_defaults(handler=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.resolve(args)
        return args.handler(args, cfg)
    except UsageError as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (cornered.CapTooLargeForMemory, oracle.DimensionTooLarge) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "resource", "message": str(exc)}), file=sys.stderr)
        return EXIT_RESOURCE
    except (
        st.EmptyIndexSet,
        st.PreconditionError,
        rp.ShapeMismatch,
        rp.UnsupportedStability,
        mk.NoSuchAutomorphism,
        ValueError,
    ) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (pipeline.GateFailure, st.AffineComponent) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "invariant", "message": str(exc)}), file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
