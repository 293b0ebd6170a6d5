"""Dense arbitrary-precision integer matrices.

Smith normal form with unimodular certificates, integer kernels, cokernels
and linear system solving.  Everything is exact; entries are Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """Row-major dense integer matrix.  Zero-dimensional shapes are allowed."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: list[list[int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [[0] * cols for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [[int(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        data = [[int(c[i]) for c in columns] for i in range(rows)]
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [r[:] for r in self.data])

    def to_rows(self) -> list[list[int]]:
        return [r[:] for r in self.data]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.data})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.data]
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.data]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols, [r + s for r, s in zip(self.data, other.data)])

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, [r[:] for r in self.data] + [r[:] for r in other.data])


def det(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    if a.rows != a.cols:
        raise ValueError("determinant of non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [r[:] for r in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a_ik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - a_ik * rk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.d.data[i][i] for i in range(min(self.d.rows, self.d.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def _snf_core(a: IntMatrix, track: bool):
    m, n = a.rows, a.cols
    M = [r[:] for r in a.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    # V is kept as a list of columns so column operations are list operations.
    Vc = [[int(i == j) for i in range(n)] for j in range(n)] if track else None

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in M:
            r[j], r[k] = r[k], r[j]
        if track:
            Vc[j], Vc[k] = Vc[k], Vc[j]

    def row_axpy(dst, src, q):  # row dst -= q * row src
        rd, rs = M[dst], M[src]
        for j in range(n):
            if rs[j]:
                rd[j] -= q * rs[j]
        if track:
            ud, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ud[j] -= q * us[j]

    def col_axpy(dst, src, q):  # col dst -= q * col src
        for r in M:
            if r[src]:
                r[dst] -= q * r[src]
        if track:
            vd, vs = Vc[dst], Vc[src]
            for i in range(n):
                if vs[i]:
                    vd[i] -= q * vs[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = M[i][t]
                if x:
                    q = x // p
                    row_axpy(i, t, q)
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = M[t][j]
                if x:
                    q = x // p
                    col_axpy(j, t, q)
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                else:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = M[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    return M, U, Vc


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with certificates: ``u @ a @ v == d``."""
    M, U, Vc = _snf_core(a, True)
    return SnfResult(
        IntMatrix(a.rows, a.cols, M),
        IntMatrix(a.rows, a.rows, U),
        IntMatrix.from_columns(Vc, a.cols) if a.cols else IntMatrix(0, 0),
    )


def smith_diagonal(a: IntMatrix) -> list[int]:
    """Diagonal of the Smith form, without transformation tracking."""
    M, _, _ = _snf_core(a, False)
    return [M[i][i] for i in range(min(a.rows, a.cols))]


def rank(a: IntMatrix) -> int:
    return sum(1 for x in smith_diagonal(a) if x)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/t1 + ... + Z/tk + Z^rank`` with t1 | t2 | ... and every ti >= 2."""

    torsion: tuple[int, ...] = ()
    rank: int = 0

    def is_zero(self) -> bool:
        return not self.torsion and self.rank == 0

    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def abelian_from_diagonal(diag: Iterable[int], generators: int) -> AbelianGroup:
    diag = [abs(x) for x in diag]
    nonzero = [x for x in diag if x]
    return AbelianGroup(tuple(x for x in nonzero if x > 1), generators - len(nonzero))


def cokernel_abelian(a: IntMatrix) -> AbelianGroup:
    """Invariants of ``Z^rows / a Z^cols`` (relations are the columns of ``a``)."""
    return abelian_from_diagonal(smith_diagonal(a), a.rows)


# ---------------------------------------------------------------------------
# Kernels and lattices
# ---------------------------------------------------------------------------

def hnf_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Canonical row Hermite form of the lattice spanned by ``vectors``.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    Zero rows are dropped, so the output is a basis.
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    col = 0
    while rows and col < n:
        active = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if active:
            p = active[0]
            if p[col] < 0:
                p = [-x for x in p]
            out.append(p)
            pivots.append(col)
        rows = rest
        col += 1
    for k in range(len(out)):
        pc = pivots[k]
        pv = out[k][pc]
        for i in range(k):
            q = out[i][pc] // pv
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[k])]
    return out


def _column_echelon(cols: list[list[int]], m: int, n: int):
    """Unimodular column reduction of the ``m``-row matrix given by ``cols``.

    Each column carries an identity tail of length ``n`` recording the
    transformation.  Returns (rank, reduced columns).
    """
    c = 0
    for i in range(m):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if cols[j][i]]
            if not nz:
                break
            piv = min(nz, key=lambda j: (abs(cols[j][i]), j))
            if piv != c:
                cols[c], cols[piv] = cols[piv], cols[c]
            pc = cols[c]
            p = pc[i]
            done = True
            for j in range(c + 1, n):
                x = cols[j][i]
                if x:
                    q = x // p
                    cols[j] = [a - q * b for a, b in zip(cols[j], pc)]
                    if cols[j][i]:
                        done = False
            if done:
                c += 1
                break
    return c, cols


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a lattice basis of ``{x in Z^cols : a x = 0}``.

    The basis is returned in canonical Hermite form, so equal lattices give
    equal matrices.
    """
    m, n = a.rows, a.cols
    cols = [[a.data[i][j] for i in range(m)] + [int(k == j) for k in range(n)] for j in range(n)]
    r, cols = _column_echelon(cols, m, n)
    basis = hnf_rows([col[m:] for col in cols[r:]])
    return IntMatrix.from_columns(basis, n) if basis else IntMatrix(n, 0)


def image_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a lattice basis of the column span of ``a``."""
    basis = hnf_rows(a.columns())
    return IntMatrix.from_columns(basis, a.rows) if basis else IntMatrix(a.rows, 0)


@dataclass(frozen=True)
class SolveResult:
    """Integer solution set ``particular + kernel * Z^k`` or a failure witness."""

    particular: IntMatrix | None
    kernel: IntMatrix
    witness: str | None = None

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def solve_linear(a: IntMatrix, b: IntMatrix | Sequence[int]) -> SolveResult:
    """Solve ``a x = b`` over the integers.

    ``b`` may be a matrix (one right-hand side per column) or a vector; the
    particular solution has the matching shape.
    """
    vector_rhs = not isinstance(b, IntMatrix)
    if vector_rhs:
        b = IntMatrix.from_columns([list(b)], len(b))
    if b.rows != a.rows:
        raise ValueError(f"shape mismatch: a is {a.rows}x{a.cols}, b has {b.rows} rows")
    res = snf(a)
    diag = res.diagonal
    r = res.rank
    ub = res.u @ b
    y = IntMatrix(a.cols, b.cols)
    for k in range(b.cols):
        for i in range(a.rows):
            c = ub.data[i][k]
            if i < r:
                if c % diag[i]:
                    return SolveResult(None, IntMatrix(a.cols, 0), f"{diag[i]} ∤ {c}")
                y.data[i][k] = c // diag[i]
            elif c:
                return SolveResult(None, IntMatrix(a.cols, 0), f"row {i} of the reduced system requires 0 = {c}")
    x = res.v @ y
    kern = hnf_rows([res.v.column(j) for j in range(r, a.cols)])
    kmat = IntMatrix.from_columns(kern, a.cols) if kern else IntMatrix(a.cols, 0)
    if vector_rhs:
        x = IntMatrix.from_columns([x.column(0)], a.cols)
    return SolveResult(x, kmat, None)


def in_lattice(basis_hnf: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Membership of ``vec`` in the lattice whose row Hermite basis is given."""
    v = list(vec)
    for row in basis_hnf:
        pc = next(j for j, x in enumerate(row) if x)
        if v[pc] % row[pc]:
            return False
        q = v[pc] // row[pc]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def parse_matrix_text(text: str) -> IntMatrix:
    """Parse the ``rows cols`` header followed by whitespace-separated rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'rows cols'")
    rows, cols = int(head[0]), int(head[1])
    if rows < 0 or cols < 0:
        raise ValueError("negative dimension")
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    data = []
    for k, ln in enumerate(body):
        entries = [int(x) for x in ln.split()]
        if len(entries) != cols:
            raise ValueError(f"row {k}: expected {cols} entries, found {len(entries)}")
        data.append(entries)
    return IntMatrix(rows, cols, data)


def format_matrix_text(a: IntMatrix) -> str:
    lines = [f"{a.rows} {a.cols}"]
    lines += [" ".join(str(x) for x in r) for r in a.data]
    return "\n".join(lines) + "\n"
