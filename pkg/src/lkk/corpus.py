"""Exhaustive small-graph corpora and deterministic parallel sweeps over them."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from itertools import permutations, product
from multiprocessing import get_context
from typing import Iterator, Sequence

from .bowen_franks import (
    class_map_kernel_check,
    forget_grading_check,
    nonvanishing_check,
    purity_and_injectivity_check,
    vdb_check,
    bf_graded,
)
from .covering import colimit_bf_oracle
from .graph import WeightedGraph
from .modules import invariant_battery

ALL_CHECKS = ("purity", "nonvanishing", "class-map", "vdb", "colimit", "battery")


@dataclass(frozen=True)
class CorpusSpec:
    max_vertices: int
    max_edge_multiplicity: int
    include_sinks: bool = True
    canonical_only: bool = True
    cap: int = 2_000_000
    min_vertices: int = 1

    def vertex_counts(self) -> range:
        return range(max(self.min_vertices, 1), self.max_vertices + 1)

    def raw_count(self) -> int:
        return sum((self.max_edge_multiplicity + 1) ** (k * k) for k in self.vertex_counts())


def canonical_form(flat: Sequence[int], k: int) -> tuple[int, ...]:
    """Lexicographically least flattening over simultaneous row/column permutations."""
    best = None
    for p in permutations(range(k)):
        cand = tuple(flat[p[i] * k + p[j]] for i in range(k) for j in range(k))
        if best is None or cand < best:
            best = cand
    return best


def corpus_matrices(spec: CorpusSpec) -> Iterator[list[list[int]]]:
    """Adjacency matrices by vertex count, then lexicographically on the flattening."""
    if spec.max_vertices < 0 or spec.max_edge_multiplicity < 0:
        raise ValueError("corpus bounds must be nonnegative")
    if spec.raw_count() > spec.cap:
        raise ValueError(f"corpus would scan {spec.raw_count()} matrices, above the cap {spec.cap}")
    for k in spec.vertex_counts():
        for flat in product(range(spec.max_edge_multiplicity + 1), repeat=k * k):
            if spec.canonical_only and canonical_form(flat, k) != flat:
                continue
            rows = [list(flat[i * k:(i + 1) * k]) for i in range(k)]
            if not spec.include_sinks and any(not any(r) for r in rows):
                continue
            yield rows


def generate_corpus(spec: CorpusSpec) -> Iterator[WeightedGraph]:
    for a in corpus_matrices(spec):
        yield WeightedGraph.from_adjacency(a)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepOptions:
    checks: tuple[str, ...] = ALL_CHECKS
    moduli: tuple[int, ...] = (2, 3, 4, 5, 9)
    class_bound: int = 4
    colimit_radius: int = 8
    prime_bound: int = 13
    truncation_bound: int = 12


def battery_digest(g: WeightedGraph, prime_bound: int) -> tuple[str, dict]:
    b = invariant_battery(bf_graded(g).module, prime_bound)
    text = b.digest()
    summary = {
        "eval_sigma_1": str(b.eval_sigma_1),
        "eval_sigma_minus_1": str(b.eval_sigma_minus_1),
        "rank_over_QLaurent": b.rank_over_QLaurent,
    }
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16], summary


def check_graph(adjacency: list[list[int]], opts: SweepOptions) -> dict:
    """All selected checks on one graph; failures carry a short reason."""
    g = WeightedGraph.from_adjacency(adjacency)
    out: dict = {"adjacency": adjacency, "checks": {}, "failures": []}

    def record(name, passed, detail=""):
        out["checks"][name] = passed
        if not passed:
            out["failures"].append({"check": name, "detail": detail})

    for name in opts.checks:
        try:
            if name == "purity":
                r = purity_and_injectivity_check(g, opts.moduli)
                record(name, r.passed, "; ".join(f"{x.name}: {x.detail}" for x in r.lines if not x.passed))
            elif name == "nonvanishing":
                r = nonvanishing_check(g, opts.prime_bound)
                record(name, r.passed, r.lines[0].detail)
            elif name == "class-map":
                r = class_map_kernel_check(g, opts.class_bound)
                record(name, r["passed"], f"hits {r['hits']}")
            elif name == "vdb":
                r = vdb_check(g, opts.truncation_bound)
                record(name, r["passed"] and forget_grading_check(g), json.dumps(r, sort_keys=True, ensure_ascii=False))
            elif name == "colimit":
                r = colimit_bf_oracle(g, opts.colimit_radius)
                record(name, r.consistent, "; ".join(r.mismatches))
            elif name == "battery":
                digest, summary = battery_digest(g, opts.prime_bound)
                out["digest"] = digest
                out["battery"] = summary
            else:
                raise ValueError(f"unknown check {name}")
        except ValueError as exc:
            if str(exc).startswith("unknown check"):
                raise
            record(name, False, f"{type(exc).__name__}: {exc}")
        except ArithmeticError as exc:
            record(name, False, f"{type(exc).__name__}: {exc}")
    return out


def _worker(args):
    adjacency, opts = args
    return check_graph(adjacency, opts)


@dataclass
class SweepReport:
    spec: CorpusSpec
    options: SweepOptions
    graphs: list[dict] = field(default_factory=list)

    @property
    def failures(self) -> list[dict]:
        return [dict(f, index=i) for i, g in enumerate(self.graphs) for f in g["failures"]]

    def collision_classes(self) -> list[list[int]]:
        if "battery" not in self.options.checks:
            return []
        classes: dict[str, list[int]] = {}
        for i, g in enumerate(self.graphs):
            classes.setdefault(g["digest"], []).append(i)
        return sorted(classes.values())

    def to_json(self) -> dict:
        return {
            "corpus": asdict(self.spec),
            "options": {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.options).items()},
            "graphs": [dict(g, index=i) for i, g in enumerate(self.graphs)],
            "collision_classes": self.collision_classes(),
            "failures": self.failures,
            "passed": not self.failures,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def sweep(spec: CorpusSpec, opts: SweepOptions | None = None, jobs: int = 1, chunksize: int = 16,
          progress=None) -> SweepReport:
    """Run the checks over the corpus; the report does not depend on ``jobs``."""
    opts = opts or SweepOptions()
    for c in opts.checks:
        if c not in ALL_CHECKS:
            raise ValueError(f"unknown check {c}; choose from {', '.join(ALL_CHECKS)}")
    items = [(a, opts) for a in corpus_matrices(spec)]
    report = SweepReport(spec, opts)
    if jobs <= 1 or len(items) < 2:
        results = map(_worker, items)
        for r in results:
            report.graphs.append(r)
            if progress:
                progress(len(report.graphs), len(items))
    else:
        with get_context("spawn").Pool(jobs) as pool:
            for r in pool.imap(_worker, items, chunksize):
                report.graphs.append(r)
                if progress:
                    progress(len(report.graphs), len(items))
    return report
