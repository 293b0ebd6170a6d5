"""Isomorphism of graded Bowen-Franks modules: invariant refutations, verified
certificates, and an honest ``unknown``."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .bowen_franks import _require_standard, bf_dual, bf_graded, relation_matrix
from .graph import WeightedGraph
from .group import INTEGERS
from .intmat import IntMatrix, cokernel_abelian, hnf_rows, kernel_basis, solve_linear
from .laurent import (
    InjectiveSolver,
    Laurent,
    LaurentMatrix,
    ONE,
    ZERO,
    degree_range,
    evaluate_at_unit,
    kron,
    window_matrix,
)
from .modules import (
    FpModule,
    InvariantBattery,
    battery_primes,
    first_battery_mismatch,
    invariant_battery,
    tensor_over_base,
)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoCertificate:
    """``u: coker X -> coker Y`` with inverse ``u_inv`` and the witnesses

    ``u X = Y w``, ``u_inv Y = X w_inv``, ``u_inv u - I = X s``, ``u u_inv - I = Y t``.
    """

    u: LaurentMatrix
    u_inv: LaurentMatrix
    w: LaurentMatrix
    w_inv: LaurentMatrix
    s: LaurentMatrix
    t: LaurentMatrix

    def verify(self, X: LaurentMatrix, Y: LaurentMatrix) -> list[str]:
        """Failed identities (empty when the certificate is valid)."""
        bad = []
        try:
            if self.u @ X != Y @ self.w:
                bad.append("u X = Y w")
            if self.u_inv @ Y != X @ self.w_inv:
                bad.append("u' Y = X w'")
            if self.u_inv @ self.u - LaurentMatrix.identity(X.rows) != X @ self.s:
                bad.append("u' u - I = X s")
            if self.u @ self.u_inv - LaurentMatrix.identity(Y.rows) != Y @ self.t:
                bad.append("u u' - I = Y t")
        except ValueError as exc:
            bad.append(f"shape mismatch: {exc}")
        return bad

    def inverse(self) -> "IsoCertificate":
        return IsoCertificate(self.u_inv, self.u, self.w_inv, self.w, self.t, self.s)

    def to_json(self) -> dict:
        return {k: getattr(self, k).text_rows() for k in ("u", "u_inv", "w", "w_inv", "s", "t")}


@dataclass(frozen=True)
class Comparison:
    equal: bool
    name: str = ""
    value_e: str = ""
    value_f: str = ""

    def to_json(self) -> dict:
        if self.equal:
            return {"equal": True}
        return {"equal": False, "invariant": self.name, "values": [self.value_e, self.value_f]}


@dataclass(frozen=True)
class IsoVerdict:
    status: str  # "isomorphic" | "distinguished" | "unknown"
    certificate: IsoCertificate | None = None
    comparison: Comparison | None = None
    bounds: dict = field(default_factory=dict)
    pointed_status: str | None = None
    method: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status, "bounds": dict(self.bounds)}
        if self.status == "isomorphic":
            out["certificate"] = self.certificate.to_json()
            out["method"] = self.method
            out["pointed_status"] = self.pointed_status
            out["statement"] = ("L(E) and L(F) are isomorphic in the hermitian and plain "
                                "Z-graded bivariant K-theory categories")
        elif self.status == "distinguished":
            out["invariant"] = self.comparison.name
            out["values"] = [self.comparison.value_e, self.comparison.value_f]
        return out


# ---------------------------------------------------------------------------
# invariant comparison
# ---------------------------------------------------------------------------

def batteries(e: WeightedGraph, f: WeightedGraph, prime_bound: int = 13) -> tuple[InvariantBattery, InvariantBattery]:
    me, mf = bf_graded(e).module, bf_graded(f).module
    primes = sorted(set(battery_primes(me, prime_bound)) | set(battery_primes(mf, prime_bound)))
    return invariant_battery(me, primes=primes), invariant_battery(mf, primes=primes)


def compare_invariants(e: WeightedGraph, f: WeightedGraph, prime_bound: int = 13) -> Comparison:
    _require_standard(e)
    _require_standard(f)
    be, bf = batteries(e, f, prime_bound)
    mm = first_battery_mismatch(be, bf)
    if mm is None:
        return Comparison(True)
    return Comparison(False, *mm)


# ---------------------------------------------------------------------------
# linear-algebra helpers over windows
# ---------------------------------------------------------------------------

def _window_of_solution(solver: InjectiveSolver, zlo: int, zhi: int) -> tuple[int, int]:
    """Exact degree range of ``y`` in ``M y = z`` for ``z`` supported in ``[zlo, zhi]``."""
    if solver.adj.rows == 0:
        return 0, -1
    alo, ahi = degree_range(solver.adj)
    return zlo + alo - solver.det.low, zhi + ahi - solver.det.high


def _vec_to_matrix(flat, rows: int, cols: int, lo: int, hi: int) -> LaurentMatrix:
    """Inverse of the column-major ``vec`` used below (``vec`` index ``j * rows + i``)."""
    n = hi - lo + 1
    data = [[ZERO] * cols for _ in range(rows)]
    for j in range(cols):
        for i in range(rows):
            k = j * rows + i
            data[i][j] = Laurent(lo, flat[k * n:(k + 1) * n]) if n > 0 else ZERO
    return LaurentMatrix(INTEGERS, rows, cols, data)


def _matrix_to_vec(m: LaurentMatrix) -> list[Laurent]:
    return [m.data[i][j] for j in range(m.cols) for i in range(m.rows)]


class _Block:
    """A block-structured integer linear system ``sum_k W(K_k) x_k = b`` over degree windows."""

    def __init__(self):
        self.unknowns: list[tuple[str, int, int, int]] = []  # name, count, lo, hi
        self.equations: list[tuple[str, int, int, int]] = []
        self.terms: list[tuple[int, int, LaurentMatrix]] = []
        self.rhs: dict[int, list[Laurent]] = {}

    def unknown(self, name, count, lo, hi) -> int:
        self.unknowns.append((name, count, lo, hi))
        return len(self.unknowns) - 1

    def equation(self, name, count) -> int:
        self.equations.append([name, count, None, None])
        return len(self.equations) - 1

    def term(self, eq: int, var: int, k: LaurentMatrix):
        self.terms.append((eq, var, k))

    def assemble(self) -> tuple[IntMatrix, list[int], list[int]]:
        # output windows per equation
        for eq, var, k in self.terms:
            _, _, lo, hi = self.unknowns[var]
            if hi < lo or k.cols == 0:
                continue
            dlo, dhi = degree_range(k)
            e = self.equations[eq]
            e[2] = lo + dlo if e[2] is None else min(e[2], lo + dlo)
            e[3] = hi + dhi if e[3] is None else max(e[3], hi + dhi)
        for eq, vec in self.rhs.items():
            e = self.equations[eq]
            for x in vec:
                if x:
                    e[2] = x.low if e[2] is None else min(e[2], x.low)
                    e[3] = x.high if e[3] is None else max(e[3], x.high)
        for e in self.equations:
            if e[2] is None:
                e[2], e[3] = 0, -1
        col_off, c = [], 0
        for _, count, lo, hi in self.unknowns:
            col_off.append(c)
            c += count * max(hi - lo + 1, 0)
        row_off, r = [], 0
        for _, count, lo, hi in self.equations:
            row_off.append(r)
            r += count * max(hi - lo + 1, 0)
        big = IntMatrix(r, c)
        for eq, var, k in self.terms:
            _, _, ilo, ihi = self.unknowns[var]
            _, _, olo, ohi = self.equations[eq]
            if ihi < ilo or ohi < olo:
                continue
            w = window_matrix(k, ilo, ihi, olo, ohi)
            ro, co = row_off[eq], col_off[var]
            for i, row in enumerate(w.data):
                dst = big.data[ro + i]
                for j, x in enumerate(row):
                    if x:
                        dst[co + j] += x
        b = [0] * r
        for eq, vec in self.rhs.items():
            _, count, lo, hi = self.equations[eq]
            n = hi - lo + 1
            for i, x in enumerate(vec):
                for e, cf in x.terms():
                    b[row_off[eq] + i * n + e - lo] += cf
        return big, col_off, b


def hom_lattice(X: LaurentMatrix, Y: LaurentMatrix, d: int, solver_y: InjectiveSolver | None) -> list[list[int]]:
    """Hermite basis for ``{u : deg u in [-d, d], u X in Im Y}`` in ``vec(u)`` window coordinates.

    ``solver_y`` is None exactly when ``Y`` has no columns; then ``u X = 0``.
    """
    nE, nF = X.rows, Y.rows
    blk = _Block()
    iu = blk.unknown("u", nF * nE, -d, d)
    xlo, xhi = degree_range(X)
    wlo, whi = _window_of_solution(solver_y, -d + xlo, d + xhi) if solver_y else (0, -1)
    iw = blk.unknown("w", Y.cols * X.cols, wlo, whi)
    eq = blk.equation("uX - Yw", X.cols * nF)
    blk.term(eq, iu, kron(X.T, LaurentMatrix.identity(nF)))
    blk.term(eq, iw, kron(LaurentMatrix.identity(X.cols), Y).scale(-1))
    big, col_off, _ = blk.assemble()
    nu = nF * nE * (2 * d + 1)
    k = kernel_basis(big)
    return hnf_rows([c[:nu] for c in k.columns()])


def _solve_inverse(X: LaurentMatrix, Y: LaurentMatrix, u: LaurentMatrix, d2: int,
                   sx: InjectiveSolver | None, sy: InjectiveSolver | None):
    """Find ``u', w', s, t`` with degree of ``u'`` in ``[-d2, d2]``, or None."""
    nE, nF, rE, rF = X.rows, Y.rows, X.cols, Y.cols
    ulo, uhi = degree_range(u)
    ylo, yhi = degree_range(Y)
    blk = _Block()
    iu = blk.unknown("u'", nE * nF, -d2, d2)
    lo, hi = -d2 + ylo, d2 + yhi
    iw = blk.unknown("w'", rE * rF, *(_window_of_solution(sx, lo, hi) if sx else (0, -1)))
    lo, hi = min(-d2 + ulo, 0), max(d2 + uhi, 0)
    is_ = blk.unknown("s", rE * nE, *(_window_of_solution(sx, lo, hi) if sx else (0, -1)))
    it = blk.unknown("t", rF * nF, *(_window_of_solution(sy, lo, hi) if sy else (0, -1)))
    e1 = blk.equation("u'Y - Xw'", rF * nE)
    blk.term(e1, iu, kron(Y.T, LaurentMatrix.identity(nE)))
    blk.term(e1, iw, kron(LaurentMatrix.identity(rF), X).scale(-1))
    e2 = blk.equation("u'u - Xs", nE * nE)
    blk.term(e2, iu, kron(u.T, LaurentMatrix.identity(nE)))
    blk.term(e2, is_, kron(LaurentMatrix.identity(nE), X).scale(-1))
    blk.rhs[e2] = _matrix_to_vec(LaurentMatrix.identity(nE))
    e3 = blk.equation("uu' - Yt", nF * nF)
    blk.term(e3, iu, kron(LaurentMatrix.identity(nF), u))
    blk.term(e3, it, kron(LaurentMatrix.identity(nF), Y).scale(-1))
    blk.rhs[e3] = _matrix_to_vec(LaurentMatrix.identity(nF))
    big, col_off, b = blk.assemble()
    res = solve_linear(big, b)
    if not res.solvable:
        return None
    x = res.particular.column(0) if isinstance(res.particular, IntMatrix) else list(res.particular)
    out = []
    shapes = [(nE, nF), (rE, rF), (rE, nE), (rF, nF)]
    for k, (name, count, lo, hi) in enumerate(blk.unknowns):
        n = max(hi - lo + 1, 0)
        chunk = x[col_off[k]:col_off[k] + count * n]
        r, c = shapes[k]
        out.append(_vec_to_matrix(chunk, r, c, lo, hi) if n else LaurentMatrix(INTEGERS, r, c))
    return tuple(out)


def _lattice_to_u(vec: list[int], nF: int, nE: int, d: int) -> LaurentMatrix:
    return _vec_to_matrix(vec, nF, nE, -d, d)


def _candidate_vectors(basis: list[list[int]], coeff_bound: int, max_depth: int):
    """Integer combinations of lattice basis vectors in a fixed deterministic order.

    Basis vectors are sorted by max-norm; combinations by depth, then by the
    sorted basis indices, then by coefficients of increasing absolute value
    (positive before negative).
    """
    order = sorted(range(len(basis)), key=lambda i: (max(abs(x) for x in basis[i]), i))
    coeffs = [c for a in range(1, coeff_bound + 1) for c in (a, -a)]
    for depth in range(1, max_depth + 1):
        for idxs in combinations(order, depth):
            for cs in product(coeffs, repeat=depth):
                v = [0] * len(basis[0])
                for i, c in zip(idxs, cs):
                    for j, x in enumerate(basis[i]):
                        if x:
                            v[j] += c * x
                yield v


def _permutation_certificates(e: WeightedGraph, f: WeightedGraph, X, Y):
    """Certificates induced by graph isomorphisms (vertex bijections preserving edge counts)."""
    n = len(e.vertices)
    if n != len(f.vertices) or n > 7:
        return
    ae, af = e.square_adjacency().data, f.square_adjacency().data
    regE, regF = e.regular_vertices(), f.regular_vertices()
    ie, jf = e.index(), f.index()
    for perm in permutations(range(n)):
        if any(ae[i][j] != af[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            continue
        u = LaurentMatrix(X.group, n, n)
        for i in range(n):
            u.data[perm[i]][i] = ONE
        w = LaurentMatrix(X.group, len(regF), len(regE))
        rposF = {v: k for k, v in enumerate(regF)}
        for k, v in enumerate(regE):
            w.data[rposF[f.vertices[perm[ie[v]]]]][k] = ONE
        yield IsoCertificate(u, u.T, w, w.T, LaurentMatrix(X.group, X.cols, n), LaurentMatrix(X.group, Y.cols, n))


def pointed_status(cert: IsoCertificate, Y: LaurentMatrix) -> bool:
    """Whether ``u [1]_E = [1]_F`` modulo the relations of F."""
    ones_e = [ONE] * cert.u.cols
    diff = [a - ONE for a in cert.u.apply(ones_e)]
    if Y.cols == 0:
        return all(x.is_zero() for x in diff)
    return InjectiveSolver(Y).contains(diff)


@dataclass(frozen=True)
class SearchResult:
    certificate: IsoCertificate | None
    method: str
    candidates_tried: int
    degree: int | None


def search_certificate(e: WeightedGraph, f: WeightedGraph, degree_bound: int = 4, coeff_bound: int = 3,
                       max_depth: int = 2, max_candidates: int = 400, require_pointed: bool = False) -> SearchResult:
    """Bounded search for a verified isomorphism ``coker X_E -> coker X_F``.

    Identity and vertex-permutation certificates are tried first; then, for
    ``d = 0 .. degree_bound``, small combinations of a basis of the lattice of
    module maps of degree at most ``d`` are tested by solving for an inverse.
    """
    if degree_bound < 0 or coeff_bound < 0:
        raise ValueError("bounds must be nonnegative")
    _require_standard(e)
    _require_standard(f)
    X, Y = relation_matrix(e), relation_matrix(f)
    sx = InjectiveSolver(X) if X.cols else None
    sy = InjectiveSolver(Y) if Y.cols else None

    def accept(cert):
        return not cert.verify(X, Y) and (not require_pointed or pointed_status(cert, Y))

    for cert in _permutation_certificates(e, f, X, Y):
        if accept(cert):
            name = "identity" if all(cert.u.data[i][i] == ONE for i in range(cert.u.rows)) else "permutation"
            return SearchResult(cert, name, 0, 0)
    tried = 0
    nE, nF = X.rows, Y.rows
    if nE == 0 or nF == 0:
        return SearchResult(None, "", 0, None)
    seen = set()
    for d in range(degree_bound + 1):
        basis = hom_lattice(X, Y, d, sy)
        if not basis:
            continue
        for vec in _candidate_vectors(basis, coeff_bound, max_depth):
            u = _lattice_to_u(vec, nF, nE, d)
            key = tuple(tuple(x.text() for x in row) for row in u.data)
            if key in seen:
                continue
            seen.add(key)
            tried += 1
            if tried > max_candidates:
                return SearchResult(None, "", tried - 1, None)
            if not _plausible(u, X, Y):
                continue
            w = _solve_w(u, X, sy)
            if w is None:
                continue
            sol = _solve_inverse(X, Y, u, degree_bound, sx, sy)
            if sol is None:
                continue
            cert = IsoCertificate(u, sol[0], w, *sol[1:])
            if accept(cert):
                return SearchResult(cert, "lattice search", tried, d)
    return SearchResult(None, "", tried, None)


def _solve_w(u: LaurentMatrix, X: LaurentMatrix, sy: InjectiveSolver | None) -> LaurentMatrix | None:
    ux = u @ X
    if sy is None:
        return LaurentMatrix(X.group, 0, X.cols) if ux.is_zero() else None
    cols = []
    for j in range(ux.cols):
        y = sy.solve(ux.column(j))
        if y is None:
            return None
        cols.append(y)
    r = sy.m.cols
    return LaurentMatrix(X.group, r, X.cols, [[cols[j][i] for j in range(X.cols)] for i in range(r)])


def _plausible(u: LaurentMatrix, X: LaurentMatrix, Y: LaurentMatrix) -> bool:
    """Cheap necessary condition: after s -> 1 and s -> -1 the induced map is onto."""
    for val in (1, -1):
        uu = evaluate_at_unit(u, val)
        yy = evaluate_at_unit(Y, val)
        big = uu.hstack(yy)
        # onto iff the cokernel of [u | Y] is trivial
        if not cokernel_abelian(big).is_zero():
            return False
    return True


def classify_pair(e: WeightedGraph, f: WeightedGraph, degree_bound: int = 4, coeff_bound: int = 3,
                  prime_bound: int = 13, max_depth: int = 2, max_candidates: int = 400,
                  pointed: bool = False) -> IsoVerdict:
    """Invariants first, then certificate search with escalating coefficient bound."""
    bounds = {"degree_bound": degree_bound, "coeff_bound": coeff_bound, "prime_bound": prime_bound,
              "max_depth": max_depth, "max_candidates": max_candidates}
    cmp = compare_invariants(e, f, prime_bound)
    if not cmp.equal:
        return IsoVerdict("distinguished", comparison=cmp, bounds=bounds)
    Y = relation_matrix(f)

    def both_ways(c, require_pointed):
        # A certificate from F to E inverts to one from E to F, and for an
        # isomorphism [1]_F -> [1]_E holds iff [1]_E -> [1]_F does.
        res = search_certificate(e, f, degree_bound, c, max_depth, max_candidates, require_pointed)
        if res.certificate is not None:
            return res.certificate, res.method
        back = search_certificate(f, e, degree_bound, c, max_depth, max_candidates, require_pointed)
        if back.certificate is not None:
            return back.certificate.inverse(), back.method + ", inverted"
        return None, ""

    for c in range(1, max(coeff_bound, 1) + 1):
        cert, method = both_ways(c, pointed)
        if cert is not None:
            ps = "pointed" if pointed_status(cert, Y) else "not pointed by this certificate"
            return IsoVerdict("isomorphic", cert, cmp, bounds, ps, method)
    if pointed:
        cert, method = both_ways(coeff_bound, False)
        if cert is not None:
            return IsoVerdict("isomorphic", cert, cmp, bounds, "no pointed certificate found at bounds", method)
    return IsoVerdict("unknown", comparison=cmp, bounds=bounds)


def uct_tensor_term(e: WeightedGraph, f: WeightedGraph, prime_bound: int = 13) -> tuple[FpModule, InvariantBattery]:
    """``BF_gr^dual(E) ⊗ BF_gr(F)`` and its battery."""
    _require_standard(e)
    _require_standard(f)
    t = tensor_over_base(bf_dual(e).module, bf_graded(f).module)
    return t, invariant_battery(t, prime_bound)
