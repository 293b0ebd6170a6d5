"""Finitely presented modules over Z, Z[s, 1/s] and Z[G].

A module is the cokernel of its relation matrix: rows are generators,
columns are relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Sequence

from .group import Group, INTEGERS
from .intmat import (
    AbelianGroup,
    IntMatrix,
    abelian_from_diagonal,
    cokernel_abelian,
    hnf_rows,
    kernel_basis,
    solve_linear,
)
from .laurent import (
    FieldLaurentMatrix,
    InjectiveSolver,
    Laurent,
    LaurentMatrix,
    ONE,
    SIGMA,
    ZERO,
    evaluate_at_unit,
    gcd_of_minors,
    is_prime,
    kron,
    laurent_det,
    prime_factors,
    rank_mod_p,
    resultant,
    snf_over_pid,
    to_field,
    window_matrix,
    degree_range,
)

BASE_Z = "Z"
BASE_LAURENT = "Z[s^±1]"
BASE_QLAURENT = "Q[s^±1]"

RANK_NAME = "rank over ℚ(σ)"
EVAL1_NAME = "eval σ=1"
EVALM1_NAME = "eval σ=−1"
FITTING_NAME = "Fitting gcds"


def base_fp(p: int) -> str:
    return f"F{p}[s^±1]"


def base_group_ring(group: Group) -> str:
    return BASE_LAURENT if group.is_integers else f"Z[{group}]"


@dataclass(frozen=True)
class FpModule:
    base: str
    generators: tuple[str, ...]
    relations: object  # IntMatrix | LaurentMatrix | FieldLaurentMatrix

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.relations.rows != len(self.generators):
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows but {len(self.generators)} generators")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def nrels(self) -> int:
        return self.relations.cols

    def to_json(self) -> dict:
        rel = self.relations
        if isinstance(rel, IntMatrix):
            cols = [[str(x) for x in c] for c in rel.columns()]
        else:
            cols = [[x.text() for x in (r[j] for r in rel.data)] for j in range(rel.cols)]
        return {"base": self.base, "generators": list(self.generators), "relations": cols}


@dataclass(frozen=True)
class PointedModule:
    module: FpModule
    point: tuple

    def __post_init__(self):
        if len(self.point) != self.module.ngens:
            raise ValueError("point length must equal the generator count")


def cokernel_module(rel, labels: Sequence[str], base: str | None = None) -> FpModule:
    """Wrap a relation matrix as a presentation; nothing is simplified."""
    labels = tuple(labels)
    if rel.rows != len(labels):
        raise ValueError(f"{len(labels)} labels for a matrix with {rel.rows} rows")
    if base is None:
        if isinstance(rel, IntMatrix):
            base = BASE_Z
        elif isinstance(rel, LaurentMatrix):
            base = base_group_ring(rel.group)
        elif isinstance(rel, FieldLaurentMatrix):
            base = BASE_QLAURENT if rel.modulus == 0 else base_fp(rel.modulus)
        else:
            raise TypeError(f"unsupported relation matrix {type(rel).__name__}")
    return FpModule(base, labels, rel)


def free_module(labels: Sequence[str], group: Group = INTEGERS) -> FpModule:
    return cokernel_module(LaurentMatrix(group, len(labels), 0), labels)


def _require_laurent(m: FpModule):
    if m.base != BASE_LAURENT or not isinstance(m.relations, LaurentMatrix):
        raise ValueError(f"operation needs a module over {BASE_LAURENT}, got {m.base}")


def base_change(m: FpModule, target) -> FpModule:
    """Tensor a presentation along a ring map.

    ``target`` is ``("eval", u)`` for s -> u in {+1, -1}, ``("mod", p)`` for
    F_p[s^±1], ``("mod", p, u)`` for F_p with s -> u, or ``("rational",)``.
    """
    _require_laurent(m)
    kind = target[0]
    if kind == "eval":
        return FpModule(BASE_Z, m.generators, evaluate_at_unit(m.relations, target[1]))
    if kind == "mod":
        p = target[1]
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if len(target) == 3:
            u = target[2] % p
            if u == 0:
                raise ValueError(f"{target[2]} is not a unit mod {p}")
            return FpModule(f"F{p}", m.generators, m.relations.map_int(lambda x: x.evaluate_mod(p, u)))
        return FpModule(base_fp(p), m.generators, to_field(m.relations, p))
    if kind == "rational":
        return FpModule(BASE_QLAURENT, m.generators, to_field(m.relations, 0))
    raise ValueError(f"inapplicable base change {target!r}")


def tensor_over_base(m: FpModule, n: FpModule) -> FpModule:
    """Presentation of ``m (x) n``: generators ``gi⊗hj``, relations ``X⊗I`` then ``I⊗Y``."""
    if m.base != n.base:
        raise ValueError(f"base mismatch: {m.base} vs {n.base}")
    X, Y = m.relations, n.relations
    if not isinstance(X, LaurentMatrix):
        raise ValueError("tensor products are implemented over Z[G]")
    grp = X.group
    rel = kron(X, LaurentMatrix.identity(n.ngens, grp)).hstack(kron(LaurentMatrix.identity(m.ngens, grp), Y))
    labels = [f"{a}⊗{b}" for a in m.generators for b in n.generators]
    return FpModule(m.base, tuple(labels), rel)


def prune(m: FpModule) -> FpModule:
    """Isomorphic presentation with every unit-pivot (generator, relation) pair eliminated."""
    _require_laurent(m)
    X = [r[:] for r in m.relations.data]
    labels = list(m.generators)
    ncols = m.relations.cols
    while True:
        hit = None
        for i, row in enumerate(X):
            for j, x in enumerate(row):
                if x.is_unit():
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        u = X[i][j]
        uinv = u ** -1
        col = [X[k][j] for k in range(len(X))]
        prow = X[i]
        newX = []
        for k, row in enumerate(X):
            if k == i:
                continue
            f = col[k] * uinv
            newX.append([row[l] - f * prow[l] if f and prow[l] else row[l] for l in range(ncols) if l != j])
        X = newX
        labels.pop(i)
        ncols -= 1
    # drop relations that became zero
    keep = [j for j in range(ncols) if any(not r[j].is_zero() for r in X)]
    X = [[r[j] for j in keep] for r in X]
    return FpModule(m.base, tuple(labels), LaurentMatrix(INTEGERS, len(labels), len(keep), X))


# ---------------------------------------------------------------------------
# s = 1 quotient and kernel of 1 - s
# ---------------------------------------------------------------------------

def quotient_by_one_minus_sigma(m: FpModule) -> AbelianGroup:
    """``M / (1 - s) M`` as an abelian group: adjoin ``(1 - s) g_i`` and set s = 1."""
    _require_laurent(m)
    g = m.ngens
    adj = LaurentMatrix.identity(g).scale(ONE - SIGMA)
    rel = m.relations.hstack(adj)
    return cokernel_abelian(evaluate_at_unit(rel, 1))


class UnstableTruncation(RuntimeError):
    """Truncated kernel computations did not stabilise within the bound."""

    def __init__(self, bound: int, history: list):
        super().__init__(f"unstable at bound {bound}: " + "; ".join(str(h) for h in history))
        self.bound = bound
        self.history = history


@dataclass(frozen=True)
class KernelTruncation:
    group: AbelianGroup
    stable_from: int
    history: tuple[AbelianGroup, ...]


def _solution_projection(lhs: IntMatrix, nx: int) -> list[list[int]]:
    """Hermite basis of the projection onto the first ``nx`` unknowns of ker(lhs)."""
    k = kernel_basis(lhs)
    return hnf_rows([c[:nx] for c in k.columns()])


def preimage_lattice(D: LaurentMatrix, X: LaurentMatrix, solver: InjectiveSolver,
                     lo: int, hi: int) -> list[list[int]]:
    """Hermite basis of ``{x : D x in Im X}`` for x supported in degrees ``[lo, hi]``.

    Coordinates are those of ``window_matrix``.  ``X`` must be injective over
    Q(s); the degree window for the preimage ``y`` is then exact, read off the
    adjugate and determinant of the fixed maximal minor.
    """
    g = X.rows
    dlo, dhi = degree_range(D)
    zlo, zhi = lo + dlo, hi + dhi
    if X.cols:
        alo, ahi = degree_range(solver.adj)
        ylo, yhi = zlo + alo - solver.det.low, zhi + ahi - solver.det.high
    else:
        ylo, yhi = 0, -1
    xlo_, xhi_ = degree_range(X)
    olo, ohi = zlo, zhi
    if yhi >= ylo:
        olo, ohi = min(olo, ylo + xlo_), max(ohi, yhi + xhi_)
    left = window_matrix(D, lo, hi, olo, ohi)
    right = window_matrix(X, ylo, yhi, olo, ohi) if yhi >= ylo else IntMatrix(g * (ohi - olo + 1), 0)
    return _solution_projection(left.hstack(-right), left.cols)


def _window_kernel_stage(X: LaurentMatrix, solver: InjectiveSolver, n: int) -> AbelianGroup:
    g = X.rows
    span = 2 * n + 1
    K = preimage_lattice(LaurentMatrix.identity(g).scale(ONE - SIGMA), X, solver, -n, n)
    if not K:
        return AbelianGroup()
    R = preimage_lattice(LaurentMatrix.identity(g), X, solver, -n, n)
    if not R:
        return AbelianGroup((), len(K))
    sol = solve_linear(IntMatrix.from_columns(K, g * span), IntMatrix.from_columns(R, g * span))
    if not sol.solvable:
        raise ArithmeticError("relation lattice is not contained in the kernel lattice")
    return cokernel_abelian(sol.particular)


def kernel_of_one_minus_sigma(m: FpModule, bound: int = 12) -> KernelTruncation:
    """``ker(1 - s : M -> M)`` by exact degree-window truncations.

    Stage ``n`` computes the classes of elements supported in degrees
    ``[-n, n]`` that are killed by ``1 - s``; each stage is an exact subgroup
    of the kernel.  The answer is declared once three consecutive stages agree.
    """
    _require_laurent(m)
    pm = prune(m)
    X = pm.relations
    if X.rows == 0:
        return KernelTruncation(AbelianGroup(), 0, (AbelianGroup(),) * 3)
    solver = InjectiveSolver(X)
    history: list[AbelianGroup] = []
    for n in range(bound + 1):
        history.append(_window_kernel_stage(X, solver, n))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return KernelTruncation(history[-1], n - 2, tuple(history))
    raise UnstableTruncation(bound, history)


# ---------------------------------------------------------------------------
# Invariant battery
# ---------------------------------------------------------------------------

def fitting_gcds(X: LaurentMatrix) -> list[Laurent]:
    """gcd of the (g-j) x (g-j) minors for j = 0, 1, ... up to (excluding) the first unit."""
    g = X.rows
    out = []
    for j in range(g):
        d = gcd_of_minors(X, g - j)
        if d.is_unit():
            break
        out.append(d)
    return out


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


@dataclass(frozen=True)
class ModpProfile:
    p: int
    u: int | None  # None means s is kept
    dim: int | None = None  # F_p-dimension after s -> u
    free_rank: int | None = None  # over F_p[s^±1] when s is kept
    torsion_dim: int | None = None

    def key(self):
        return (self.p, -1 if self.u is None else self.u)

    def is_zero(self) -> bool:
        if self.u is None:
            return self.free_rank == 0 and self.torsion_dim == 0
        return self.dim == 0

    def to_json(self) -> dict:
        if self.u is None:
            return {"p": self.p, "u": "s", "free_rank": self.free_rank, "torsion_dim": self.torsion_dim}
        return {"p": self.p, "u": self.u, "dim": self.dim}

    def describe(self) -> str:
        if self.u is None:
            return f"F{self.p}[s^±1]-rank {self.free_rank}, torsion F{self.p}-dim {self.torsion_dim}"
        return f"F{self.p}-dim {self.dim}"


@dataclass(frozen=True)
class InvariantBattery:
    eval_sigma_1: AbelianGroup
    eval_sigma_minus_1: AbelianGroup
    rank_over_QLaurent: int
    fitting_gcds: tuple[Laurent, ...]
    modp_profiles: tuple[ModpProfile, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "eval_sigma_1": self.eval_sigma_1.to_json(),
            "eval_sigma_minus_1": self.eval_sigma_minus_1.to_json(),
            "rank_over_QLaurent": self.rank_over_QLaurent,
            "fitting_gcds": [x.text() for x in self.fitting_gcds],
            "modp_profiles": [p.to_json() for p in self.modp_profiles],
        }

    def digest(self) -> str:
        import json
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def fields_in_order(self):
        """(name, value-as-text) pairs in the fixed comparison order."""
        yield RANK_NAME, str(self.rank_over_QLaurent)
        yield EVAL1_NAME, str(self.eval_sigma_1)
        yield EVALM1_NAME, str(self.eval_sigma_minus_1)
        yield FITTING_NAME, "[" + ", ".join(x.text() for x in self.fitting_gcds) + "]"
        for prof in self.modp_profiles:
            name = f"mod {prof.p}, s kept" if prof.u is None else f"mod {prof.p}, s={prof.u}"
            yield name, prof.describe()


def modp_profile(X: LaurentMatrix, p: int, u: int | None) -> ModpProfile:
    g = X.rows
    if u is None:
        res = snf_over_pid(to_field(X, p), track=False)
        diag = [x for x in res.diagonal if x]
        return ModpProfile(p, None, free_rank=g - len(diag), torsion_dim=sum(x.span for x in diag))
    a = X.map_int(lambda x: x.evaluate_mod(p, u))
    return ModpProfile(p, u, dim=g - rank_mod_p(a, p))


def battery_primes(m: FpModule, prime_bound: int) -> list[int]:
    """Primes up to the bound plus those dividing the torsion of the s = ±1 evaluations."""
    ps = set(_primes_upto(prime_bound))
    for u in (1, -1):
        for t in cokernel_abelian(evaluate_at_unit(m.relations, u)).torsion:
            ps.update(p for p, _ in prime_factors(t))
    return sorted(ps)


def invariant_battery(m: FpModule, prime_bound: int = 13, primes: Sequence[int] | None = None) -> InvariantBattery:
    _require_laurent(m)
    X = m.relations
    if primes is None:
        primes = battery_primes(m, prime_bound)
    e1 = cokernel_abelian(evaluate_at_unit(X, 1))
    em1 = cokernel_abelian(evaluate_at_unit(X, -1))
    rank_q = m.ngens - snf_over_pid(to_field(X, 0), track=False).rank
    profiles = []
    for p in sorted(primes):
        profiles.append(modp_profile(X, p, None))
        for u in range(1, p):
            profiles.append(modp_profile(X, p, u))
    return InvariantBattery(e1, em1, rank_q, tuple(fitting_gcds(X)), tuple(profiles))


def first_battery_mismatch(a: InvariantBattery, b: InvariantBattery):
    """First differing field in the fixed order, as ``(name, value_a, value_b)``, or None."""
    fa = dict(a.fields_in_order())
    fb = dict(b.fields_in_order())
    for name, va in a.fields_in_order():
        if name in fb and fb[name] != va:
            return name, va, fb[name]
    for name, vb in b.fields_in_order():
        if name not in fa:
            return name, "(not computed)", vb
    return None


# ---------------------------------------------------------------------------
# Zero test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroVerdict:
    status: str  # "yes" | "no" | "unknown"
    witness: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "witness": self.witness}


def is_zero_module(m: FpModule, prime_bound: int = 13) -> ZeroVerdict:
    """Three-valued vanishing test for a module over Z[s^±1]."""
    _require_laurent(m)
    X = m.relations
    g = m.ngens
    if g == 0:
        return ZeroVerdict("yes", "no generators")
    rank_q = g - snf_over_pid(to_field(X, 0), track=False).rank
    if rank_q:
        return ZeroVerdict("no", f"{RANK_NAME} is {rank_q}")
    for u in (1, -1):
        grp = cokernel_abelian(evaluate_at_unit(X, u))
        if not grp.is_zero():
            return ZeroVerdict("no", f"{EVAL1_NAME if u == 1 else EVALM1_NAME} gives {grp}")
    fit0 = gcd_of_minors(X, g)
    if not fit0.is_unit():
        return ZeroVerdict("no", f"gcd of maximal minors {fit0.text()} is not a unit")
    for p in _primes_upto(prime_bound):
        prof = modp_profile(X, p, None)
        if not prof.is_zero():
            return ZeroVerdict("no", f"mod {p}: {prof.describe()}")
    # Fitting ideal contains an integer N = gcd of pairwise resultants; M = 0 iff M/pM = 0 for p | N.
    ms = []
    for cs in combinations(range(X.cols), g):
        d = laurent_det(X.submatrix(range(g), cs))
        if d.is_unit():
            return ZeroVerdict("yes", "a maximal minor is a unit")
        if not d.is_zero():
            ms.append(d)
    N = 0
    for f, h in combinations(ms, 2):
        N = gcd(N, resultant(f, h))
        if abs(N) == 1:
            break
    if len(ms) == 1 and ms[0].span == 0:
        N = ms[0].c[0]
    if N == 0:
        return ZeroVerdict("unknown", "no nonzero integer found in the Fitting ideal")
    for p, _ in prime_factors(N):
        prof = modp_profile(X, p, None)
        if not prof.is_zero():
            return ZeroVerdict("no", f"mod {p}: {prof.describe()}")
    return ZeroVerdict("yes", f"Fitting ideal contains {abs(N)} and M/pM = 0 for every p | {abs(N)}")


def module_report(m: FpModule, prime_bound: int = 13, battery: InvariantBattery | None = None) -> dict:
    out = m.to_json()
    if m.base == BASE_LAURENT:
        out["battery"] = (battery or invariant_battery(m, prime_bound)).to_json()
    return out
