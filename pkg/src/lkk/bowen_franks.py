"""Graph-level invariants: graded, dual and ungraded Bowen-Franks modules and the
checks that tie them together."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .graph import WeightedGraph
from .intmat import AbelianGroup, IntMatrix, cokernel_abelian, in_lattice, kernel_basis
from .laurent import (
    InjectiveSolver,
    Laurent,
    LaurentMatrix,
    ONE,
    ZERO,
    is_prime,
    prime_factors,
    rank_over_field_laurent,
    ring_one,
    snf_over_pid,
    to_field,
)
from .modules import (
    FpModule,
    InvariantBattery,
    PointedModule,
    UnstableTruncation,
    cokernel_module,
    invariant_battery,
    is_zero_module,
    kernel_of_one_minus_sigma,
    preimage_lattice,
    quotient_by_one_minus_sigma,
)


class GradingError(ValueError):
    """The operation needs the standard grading (G = Z, every weight 1)."""


def _require_standard(g: WeightedGraph):
    if not g.has_standard_grading():
        raise GradingError("operation needs the standard grading: G = Z and every edge of weight 1")


@dataclass(frozen=True)
class BfGraded:
    module: FpModule
    pointed: PointedModule


@dataclass(frozen=True)
class BfDual:
    module: FpModule


def relation_matrix(g: WeightedGraph) -> LaurentMatrix:
    """``I - A_w^t``: column for regular ``v`` is ``e_v - sum_{e: v->w} w(e) e_w``."""
    reg = g.regular_vertices()
    n = len(g.vertices)
    idx = g.index()
    aw = g.weighted_adjacency()
    one = ring_one(g.group)
    data = [[-aw.data[j][i] for j in range(len(reg))] for i in range(n)]
    for j, v in enumerate(reg):
        i = idx[v]
        data[i][j] = data[i][j] + one
    return LaurentMatrix(g.group, n, len(reg), data)


def bf_graded(g: WeightedGraph) -> BfGraded:
    m = cokernel_module(relation_matrix(g), g.vertices)
    one = ring_one(g.group)
    return BfGraded(m, PointedModule(m, tuple(one for _ in g.vertices)))


def bf_dual(g: WeightedGraph) -> BfDual:
    X = relation_matrix(g)
    return BfDual(cokernel_module(X.T, g.regular_vertices()))


def ungraded_relation_matrix(g: WeightedGraph) -> IntMatrix:
    """``I - A^t`` over Z with weights forgotten; rows E^0, columns reg(E)."""
    a = g.adjacency_counts()
    reg = g.regular_vertices()
    idx = g.index()
    out = IntMatrix(len(g.vertices), len(reg))
    for j, v in enumerate(reg):
        for i in range(len(g.vertices)):
            out.data[i][j] = -a.data[j][i]
        out.data[idx[v]][j] += 1
    return out


def bf_ungraded(g: WeightedGraph) -> AbelianGroup:
    return cokernel_abelian(ungraded_relation_matrix(g))


# ---------------------------------------------------------------------------
# purity and nonvanishing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckLine:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CheckReport:
    kind: str
    lines: tuple[CheckLine, ...]

    @property
    def passed(self) -> bool:
        return all(x.passed for x in self.lines)

    def to_json(self) -> dict:
        return {"check": self.kind, "passed": self.passed, "lines": [x.to_json() for x in self.lines]}


def purity_and_injectivity_check(g: WeightedGraph, moduli: Sequence[int] = (2, 3, 4, 5, 9)) -> CheckReport:
    """``I - sA^t`` injective over Q[s^±1] and modulo each ``m`` (via its primes)."""
    _require_standard(g)
    X = relation_matrix(g)
    r = X.cols
    lines = []
    rk = rank_over_field_laurent(X, 0) if r else 0
    lines.append(CheckLine("injective over Q[s^±1]", rk == r, f"rank {rk} of {r} columns"))
    done: dict[int, int] = {}
    for m in moduli:
        if m < 2:
            raise ValueError(f"modulus {m} must be at least 2")
        ok = True
        notes = []
        for p, _ in prime_factors(m):
            if p not in done:
                done[p] = rank_over_field_laurent(X, p) if r else 0
            notes.append(f"F{p}-rank {done[p]} of {r}")
            ok &= done[p] == r
        lines.append(CheckLine(f"injective mod {m}", ok, ", ".join(notes)))
    return CheckReport("purity", tuple(lines))


def nonvanishing_check(g: WeightedGraph, prime_bound: int = 13) -> CheckReport:
    """Runs the zero test on BF_gr; a "yes" would contradict nonvanishing for finite graphs."""
    _require_standard(g)
    v = is_zero_module(bf_graded(g).module, prime_bound)
    ok = v.status == "no"
    detail = f"nonzero: {v.witness}" if ok else f"zero test returned {v.status}: {v.witness}"
    return CheckReport("nonvanishing", (CheckLine("BF_gr is nonzero", ok, detail),))


# ---------------------------------------------------------------------------
# class map positivity and the positive cone
# ---------------------------------------------------------------------------

def degree_zero_relation_lattice(X: LaurentMatrix, solver: InjectiveSolver | None = None) -> list[list[int]]:
    """Hermite basis of ``Z^{E^0} ∩ Im X`` (constant vectors that die in the cokernel)."""
    solver = solver or InjectiveSolver(X)
    return preimage_lattice(LaurentMatrix.identity(X.rows), X, solver, 0, 0)


def class_map_kernel_check(g: WeightedGraph, coeff_bound: int = 4) -> dict:
    """Search ``x`` in ``{0..coeff_bound}^{E^0} \\ 0`` with ``cl(x) = 0``.

    Membership uses the exact lattice of degree-zero vectors in the relation
    image, so the degree window does not need to grow with the bound.
    """
    _require_standard(g)
    if coeff_bound < 0:
        raise ValueError("coeff_bound must be nonnegative")
    X = relation_matrix(g)
    n = X.rows
    lattice = degree_zero_relation_lattice(X)
    hits = []
    if lattice:
        for x in product(range(coeff_bound + 1), repeat=n):
            if any(x) and in_lattice(lattice, list(x)):
                hits.append(list(x))
    return {
        "check": "class-map",
        "coeff_bound": coeff_bound,
        "search_space": (coeff_bound + 1) ** n - 1,
        "relation_lattice_rank": len(lattice),
        "hits": hits,
        "passed": not hits,
    }


def _vector_from_terms(g: WeightedGraph, terms) -> list[Laurent]:
    """``terms`` is an iterable of ``(coeff, vertex, power)``."""
    idx = g.index()
    vec = [ZERO] * len(g.vertices)
    for c, v, k in terms:
        if v not in idx:
            raise ValueError(f"unknown vertex {v}")
        vec[idx[v]] = vec[idx[v]] + Laurent.monomial(c, k)
    return vec


@dataclass(frozen=True)
class ConeResult:
    found: bool
    combination: tuple  # ((n, vertex, k), ...)
    witness: tuple  # y with X y = combination - x
    searched: int
    degree_bound: int
    coeff_bound: int

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "combination": [list(t) for t in self.combination],
            "witness": [y.text() for y in self.witness],
            "searched": self.searched,
            "degree_bound": self.degree_bound,
            "coeff_bound": self.coeff_bound,
        }


def positive_cone_membership(g: WeightedGraph, terms, degree_bound: int = 2, coeff_bound: int = 2,
                             max_candidates: int = 200_000) -> ConeResult:
    """Bounded search for ``x ≡ sum n_i s^{k_i}[v_i]`` with every ``n_i >= 0``.

    Candidates are visited by increasing total coefficient, then
    lexicographically; failure is only a statement about the bounds.
    """
    _require_standard(g)
    X = relation_matrix(g)
    x = _vector_from_terms(g, terms)
    solver = InjectiveSolver(X)
    # low |k| first, so a combination that is already nonnegative is returned as is
    powers = sorted(range(-degree_bound, degree_bound + 1), key=lambda k: (abs(k), k))
    slots = [(v, k) for k in powers for v in g.vertices]
    searched = 0

    def attempt(combo):
        c = _vector_from_terms(g, combo)
        diff = [a - b for a, b in zip(c, x)]
        return solver.solve(diff)

    def compositions(total, nslots):
        # nonnegative vectors of the given sum, entries <= coeff_bound, lexicographically descending
        if nslots == 0:
            if total == 0:
                yield ()
            return
        for first in range(min(total, coeff_bound), -1, -1):
            for rest in compositions(total - first, nslots - 1):
                yield (first,) + rest

    for total in range(0, coeff_bound * len(slots) + 1):
        for vec in compositions(total, len(slots)):
            searched += 1
            combo = tuple((n, v, k) for n, (v, k) in zip(vec, slots) if n)
            y = attempt(combo)
            if y is not None:
                return ConeResult(True, combo, tuple(y), searched, degree_bound, coeff_bound)
            if searched >= max_candidates:
                return ConeResult(False, (), (), searched, degree_bound, coeff_bound)
    return ConeResult(False, (), (), searched, degree_bound, coeff_bound)


# ---------------------------------------------------------------------------
# sequence terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceTerms:
    m: int
    cokernel: FpModule
    cokernel_battery: InvariantBattery
    kernel_zero: bool
    kernel_detail: tuple[tuple[int, int], ...]  # (p, rank deficiency over F_p[s^±1])

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "cokernel": self.cokernel.to_json(),
            "cokernel_battery": self.cokernel_battery.to_json(),
            "kernel_zero": self.kernel_zero,
            "kernel_rank_deficiency": [{"p": p, "deficiency": d} for p, d in self.kernel_detail],
        }


def tor1_with_cyclic(X: LaurentMatrix, m: int) -> tuple[bool, tuple[tuple[int, int], ...]]:
    """``ker(X ⊗ Z/m)`` for ``X`` injective over Z[s^±1]; this is Tor_1 of coker X with Z/m.

    It vanishes iff ``X`` stays injective over F_p[s^±1] for every ``p | m``
    (a p-primary kernel has a nonzero p-torsion element).
    """
    if m == 0:
        return True, ()
    detail = []
    for p, _ in prime_factors(m):
        rk = rank_over_field_laurent(X, p) if X.cols else 0
        detail.append((p, X.cols - rk))
    return all(d == 0 for _, d in detail), tuple(detail)


def sequence_terms(g: WeightedGraph, m: int, prime_bound: int = 13) -> SequenceTerms:
    """``BF_gr ⊗ Z/m`` (presented by ``[X | mI]``) and ``ker((I - A_w^t) ⊗ Z/m)``."""
    if m < 0:
        raise ValueError("coefficient order m must be nonnegative")
    bf = bf_graded(g).module
    X = bf.relations
    if m == 0:
        coker = bf
    else:
        coker = cokernel_module(X.hstack(LaurentMatrix.identity(X.rows, X.group).scale(m)), bf.generators)
    battery = invariant_battery(coker, prime_bound)
    zero, detail = tor1_with_cyclic(X, m)
    return SequenceTerms(m, coker, battery, zero, detail)


# ---------------------------------------------------------------------------
# Van den Bergh consistency at K_0
# ---------------------------------------------------------------------------

def vdb_check(g: WeightedGraph, bound: int = 12) -> dict:
    """Compare ``coker(1 - s)`` and ``ker(1 - s)`` on BF_gr with ``coker`` and ``ker`` of ``I - A^t``."""
    _require_standard(g)
    bf = bf_graded(g).module
    a = ungraded_relation_matrix(g)
    q_graded = quotient_by_one_minus_sigma(bf)
    q_plain = cokernel_abelian(a)
    k_plain = AbelianGroup((), kernel_basis(a).cols)
    try:
        kt = kernel_of_one_minus_sigma(bf, bound)
        k_graded, k_note = kt.group, f"stable from window {kt.stable_from}"
        k_ok = k_graded == k_plain
        k_graded_json = k_graded.to_json()
    except UnstableTruncation as exc:
        k_graded_json, k_note, k_ok = None, str(exc), False
    return {
        "check": "vdb",
        "cokernel": {"graded": q_graded.to_json(), "ungraded": q_plain.to_json(), "passed": q_graded == q_plain},
        "kernel": {"graded": k_graded_json, "ungraded": k_plain.to_json(), "passed": k_ok, "note": k_note},
        "passed": q_graded == q_plain and k_ok,
    }


def forget_grading_check(g: WeightedGraph) -> bool:
    """BF_gr at s = 1 equals the ungraded Bowen-Franks group."""
    from .laurent import evaluate_at_unit
    return cokernel_abelian(evaluate_at_unit(bf_graded(g).module.relations, 1)) == bf_ungraded(g)


def point_evaluations(g: WeightedGraph) -> dict:
    """Where ``[1]`` sits after s -> 1 and s -> -1 (coordinates in the SNF basis)."""
    from .intmat import snf
    from .laurent import evaluate_at_unit
    X = bf_graded(g).module.relations
    out = {}
    for u, key in ((1, "sigma_1"), (-1, "sigma_minus_1")):
        a = evaluate_at_unit(X, u)
        res = snf(a)
        ones = [1] * a.rows
        coords = res.u.apply(ones)
        diag = res.diagonal
        entries = []
        for i, c in enumerate(coords):
            d = diag[i] if i < len(diag) else 0
            if d == 1:
                continue
            entries.append({"order": d, "coordinate": c % d if d else c})
        out[key] = entries
    return out
