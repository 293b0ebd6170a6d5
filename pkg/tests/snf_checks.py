"""Independent verification of Smith normal forms, shared by the tests."""

from lkk.intmat import IntMatrix, det, snf
from lkk.laurent import FieldLaurent, FieldLaurentMatrix, Laurent, LaurentMatrix, snf_over_pid


def random_laurent_matrix(rng, r, c, deg=2, coeff=3):
    def entry():
        lo = rng.randint(-deg, deg)
        hi = rng.randint(lo, deg)
        return Laurent(lo, [rng.randint(-coeff, coeff) for _ in range(hi - lo + 1)])
    return LaurentMatrix.from_rows([[entry() for _ in range(c)] for _ in range(r)], cols=c)


def field_det(m: FieldLaurentMatrix) -> FieldLaurent:
    """Cofactor expansion; deliberately unrelated to the elimination under test."""
    n = m.rows
    if n == 0:
        return FieldLaurent.const(m.modulus, 1)
    total = FieldLaurent(m.modulus)
    for j in range(n):
        x = m.data[0][j]
        if not x:
            continue
        minor = FieldLaurentMatrix(m.modulus, n - 1, n - 1,
                                   [[r[k] for k in range(n) if k != j] for r in m.data[1:]])
        term = x * field_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def int_snf_problems(a: IntMatrix) -> list[str]:
    res = snf(a)
    out = []
    if res.u @ a @ res.v != res.d:
        out.append("u a v != d")
    if abs(det(res.u)) != 1 or abs(det(res.v)) != 1:
        out.append("transform not unimodular")
    for i in range(res.d.rows):
        for j in range(res.d.cols):
            if i != j and res.d.data[i][j]:
                out.append("d not diagonal")
    diag = res.diagonal
    nz = [x for x in diag if x]
    if diag[:len(nz)] != nz or any(x < 0 for x in nz):
        out.append("diagonal not normalised")
    if any(b % a for a, b in zip(nz, nz[1:])):
        out.append("divisibility chain broken")
    return out


def pid_snf_problems(fm: FieldLaurentMatrix) -> list[str]:
    res = snf_over_pid(fm)
    out = []
    if res.u @ fm @ res.v != res.d:
        out.append("u a v != d")
    if not (field_det(res.u).is_unit() and field_det(res.v).is_unit()):
        out.append("transform not invertible")
    for i in range(res.d.rows):
        for j in range(res.d.cols):
            if i != j and res.d.data[i][j]:
                out.append("d not diagonal")
    diag = res.diagonal
    nz = [x for x in diag if x]
    if diag[:len(nz)] != nz:
        out.append("zeros not last")
    if any(x.low != 0 or x.c[-1] != 1 for x in nz):
        out.append("diagonal not monic")
    if any(b.divmod(a)[1] for a, b in zip(nz, nz[1:])):
        out.append("divisibility chain broken")
    return out
