"""``lkk`` command-line front end.

Exit codes: 0 success, 2 malformed or unsupported input, 3 a property that
must hold for every graph failed (always a bug), 4 unknown verdict under
``classify --strict``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

from .bowen_franks import (
    GradingError,
    bf_dual,
    bf_graded,
    bf_ungraded,
    nonvanishing_check,
    point_evaluations,
    purity_and_injectivity_check,
    sequence_terms,
    vdb_check,
)
from .classify import classify_pair
from .corpus import ALL_CHECKS, CorpusSpec, SweepOptions, sweep
from .covering import colimit_bf_oracle, covering_graph
from .graph import GraphFormatError, WeightedGraph, validate
from .intmat import format_matrix_text, parse_matrix_text, snf
from .laurent import LaurentMatrix, snf_over_pid, to_field
from .modules import invariant_battery, module_report

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_UNKNOWN = 0, 2, 3, 4


@dataclass
class Config:
    degree_bound_default: int = 4
    coeff_bound_default: int = 3
    truncation_radius_default: int = 8
    prime_bound_default: int = 13
    jobs: int | str = "auto"

    @classmethod
    def load(cls, path: str | None) -> "Config":
        cfg = cls()
        if path is None:
            return cfg
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        for k, v in data.items():
            if k not in known:
                raise ValueError(f"unknown config field {k}")
            setattr(cfg, k, v)
        cfg.check()
        return cfg

    def check(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "jobs" and v == "auto":
                continue
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise ValueError(f"config field {f.name} must be a positive integer")

    def job_count(self) -> int:
        if self.jobs == "auto":
            return os.cpu_count() or 1
        return int(self.jobs)


class InputError(Exception):
    pass


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n")


def load_graph(path: str) -> WeightedGraph:
    try:
        g = WeightedGraph.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    problems = validate(g)
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    return g


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args, cfg) -> int:
    try:
        g = WeightedGraph.load(args.graph)
    except OSError as exc:
        emit({"valid": False, "violations": [f"cannot read {args.graph}: {exc.strerror}"]})
        return EXIT_INPUT
    except GraphFormatError as exc:
        emit({"valid": False, "violations": [str(exc)]})
        return EXIT_INPUT
    problems = validate(g)
    emit({"valid": not problems, "violations": problems,
          "vertices": len(g.vertices), "edges": len(g.edges), "group": str(g.group)})
    return EXIT_INPUT if problems else EXIT_OK


def cmd_invariants(args, cfg) -> int:
    g = load_graph(args.graph)
    pb = args.prime_bound or cfg.prime_bound_default
    bf = bf_graded(g)
    out = {"ungraded_bowen_franks": bf_ungraded(g).to_json()}
    if not g.group.is_integers:
        out["note"] = "battery is computed only for G = Z"
        emit(out)
        return EXIT_OK
    out["battery"] = invariant_battery(bf.module, pb).to_json()
    out["point"] = point_evaluations(g)
    status = EXIT_OK
    if g.has_standard_grading():
        pur = purity_and_injectivity_check(g)
        nv = nonvanishing_check(g, pb)
        out["purity"] = pur.to_json()
        out["nonvanishing"] = nv.to_json()
        if not (pur.passed and nv.passed):
            status = EXIT_CHECK
    emit(out)
    return status


def cmd_bfgr(args, cfg) -> int:
    g = load_graph(args.graph)
    pb = args.prime_bound or cfg.prime_bound_default
    if args.mod is not None:
        if args.mod < 0:
            raise InputError("--mod must be nonnegative")
        if not g.group.is_integers:
            raise InputError("--mod needs G = Z")
        st = sequence_terms(g, args.mod, pb)
        out = module_report(st.cokernel, pb, st.cokernel_battery)
        out["kernel"] = {"zero": st.kernel_zero,
                         "rank_deficiency": [{"p": p, "deficiency": d} for p, d in st.kernel_detail]}
        out["m"] = args.mod
        emit(out)
        return EXIT_OK if st.kernel_zero or not g.has_standard_grading() else EXIT_CHECK
    if args.dual:
        m = bf_dual(g).module
    else:
        m = bf_graded(g).module
    out = module_report(m, pb) if g.group.is_integers else m.to_json()
    if args.pointed and not args.dual:
        out["point"] = [x.text() for x in bf_graded(g).pointed.point]
        if g.group.is_integers:
            out["point_evaluations"] = point_evaluations(g)
    emit(out)
    return EXIT_OK


def cmd_cover(args, cfg) -> int:
    g = load_graph(args.graph)
    radius = args.radius if args.radius is not None else cfg.truncation_radius_default
    try:
        c = covering_graph(g, None if g.group.is_finite else radius)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    emit(c.to_json())
    return EXIT_OK


def cmd_colimit(args, cfg) -> int:
    g = load_graph(args.graph)
    stages = args.stages if args.stages is not None else cfg.truncation_radius_default
    v = colimit_bf_oracle(g, stages, args.kernel_stages)
    emit(v.to_json())
    return EXIT_OK if v.consistent else EXIT_CHECK


def cmd_vdb(args, cfg) -> int:
    g = load_graph(args.graph)
    r = vdb_check(g, args.bound)
    emit(r)
    return EXIT_OK if r["passed"] else EXIT_CHECK


def cmd_classify(args, cfg) -> int:
    e, f = load_graph(args.e), load_graph(args.f)
    d = args.degree_bound if args.degree_bound is not None else cfg.degree_bound_default
    c = args.coeff_bound if args.coeff_bound is not None else cfg.coeff_bound_default
    pb = args.prime_bound or cfg.prime_bound_default
    v = classify_pair(e, f, d, c, pb, max_candidates=args.max_candidates, pointed=args.pointed)
    emit(v.to_json())
    if v.status == "unknown" and args.strict:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_snf(args, cfg) -> int:
    try:
        with open(args.matrix, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.matrix}: {exc.strerror}") from exc
    if args.field is None:
        try:
            a = parse_matrix_text(text)
        except ValueError as exc:
            raise InputError(f"{args.matrix}: {exc}") from exc
        res = snf(a)
        ok = res.u @ a @ res.v == res.d
        emit({"d": format_matrix_text(res.d), "u": format_matrix_text(res.u), "v": format_matrix_text(res.v),
              "diagonal": [str(x) for x in res.diagonal], "verified": ok})
        return EXIT_OK if ok else EXIT_CHECK
    try:
        rows = json.loads(text)
        m = LaurentMatrix.from_rows(rows)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{args.matrix}: expected a JSON list of rows of Laurent strings ({exc})") from exc
    modulus = 0 if args.field == "Q" else int(args.field)
    try:
        fm = to_field(m, modulus)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    res = snf_over_pid(fm)
    ok = res.u @ fm @ res.v == res.d
    emit({"field": args.field, "d": res.d.text_rows(), "u": res.u.text_rows(), "v": res.v.text_rows(),
          "diagonal": [x.text() for x in res.diagonal], "verified": ok})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_enumerate(args, cfg) -> int:
    checks = ALL_CHECKS if args.checks == "all" else tuple(c.strip() for c in args.checks.split(",") if c.strip())
    for c in checks:
        if c not in ALL_CHECKS:
            raise InputError(f"unknown check {c}; choose from {', '.join(ALL_CHECKS)}")
    spec = CorpusSpec(args.max_vertices, args.max_multiplicity, include_sinks=not args.no_sinks,
                      canonical_only=not args.all_labelings)
    opts = SweepOptions(checks=checks, prime_bound=args.prime_bound or cfg.prime_bound_default,
                        colimit_radius=cfg.truncation_radius_default)
    jobs = args.jobs if args.jobs is not None else cfg.job_count()
    try:
        rep = sweep(spec, opts, jobs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = rep.dumps()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        emit({"graphs": len(rep.graphs), "failures": len(rep.failures),
              "collision_classes": len(rep.collision_classes()), "report": args.report})
    else:
        sys.stdout.write(text)
    return EXIT_OK if not rep.failures else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lkk", description="Graded Bowen-Franks invariants of weighted graphs.")
    p.add_argument("--config", help="JSON file overriding the defaults")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a graph file")
    s.add_argument("graph")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariants", help="invariant battery and sanity checks")
    s.add_argument("graph")
    s.add_argument("--prime-bound", type=int)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("bfgr", help="presentation of the graded Bowen-Franks module")
    s.add_argument("graph")
    s.add_argument("--dual", action="store_true")
    s.add_argument("--pointed", action="store_true")
    s.add_argument("--mod", type=int, help="tensor with Z/m (m = 0 means Z)")
    s.add_argument("--prime-bound", type=int)
    s.set_defaults(func=cmd_bfgr)

    s = sub.add_parser("cover", help="covering graph (window [-n, n] for G = Z)")
    s.add_argument("graph")
    s.add_argument("--radius", type=int)
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("colimit-check", help="compare the truncation colimit with the presentation")
    s.add_argument("graph")
    s.add_argument("--stages", type=int)
    s.add_argument("--kernel-stages", type=int, default=2)
    s.set_defaults(func=cmd_colimit)

    s = sub.add_parser("vdb", help="cokernel and kernel of 1 - s against I - A^t")
    s.add_argument("graph")
    s.add_argument("--bound", type=int, default=12, help="largest truncation window")
    s.set_defaults(func=cmd_vdb)

    s = sub.add_parser("classify", help="decide BF_gr(E) = BF_gr(F) with certificates")
    s.add_argument("e")
    s.add_argument("f")
    s.add_argument("--degree-bound", type=int)
    s.add_argument("--coeff-bound", type=int)
    s.add_argument("--prime-bound", type=int)
    s.add_argument("--max-candidates", type=int, default=400)
    s.add_argument("--pointed", action="store_true", help="prefer certificates sending [1] to [1]")
    s.add_argument("--strict", action="store_true", help="exit 4 on an unknown verdict")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("snf", help="Smith normal form with certificates")
    s.add_argument("matrix", help="integer matrix text, or JSON Laurent rows with --field")
    s.add_argument("--field", help="Q or a prime p: work over Q[s^±1] or F_p[s^±1]")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("enumerate", help="sweep checks over all small graphs")
    s.add_argument("--max-vertices", type=int, required=True)
    s.add_argument("--max-multiplicity", type=int, required=True)
    s.add_argument("--jobs", type=int)
    s.add_argument("--checks", default="all", help=f"'all' or a comma list of {','.join(ALL_CHECKS)}")
    s.add_argument("--report", help="write the full report here instead of standard output")
    s.add_argument("--no-sinks", action="store_true")
    s.add_argument("--all-labelings", action="store_true", help="skip deduplication up to relabeling")
    s.add_argument("--prime-bound", type=int)
    s.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = Config.load(args.config)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"lkk: bad config: {exc}\n")
        return EXIT_INPUT
    try:
        return args.func(args, cfg)
    except (InputError, GradingError) as exc:
        sys.stderr.write(f"lkk: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
