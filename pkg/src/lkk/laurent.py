"""Exact arithmetic in Z[s, 1/s], in Z[G] for f.g. abelian G, and in the PIDs
Q[s, 1/s] and F_p[s, 1/s]; dense matrices over these rings.

``s`` is the degree-shift generator (the sigma of the graded theory).
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .group import Group, INTEGERS
from .intmat import IntMatrix, det as int_det


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def prime_factors(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of ``|n|`` as ``[(p, exponent), ...]``, ascending."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# Z[s, 1/s]
# ---------------------------------------------------------------------------

def _trim(low: int, c: Sequence[int]):
    i, j = 0, len(c)
    while i < j and not c[i]:
        i += 1
    while j > i and not c[j - 1]:
        j -= 1
    if i == j:
        return 0, ()
    return low + i, tuple(c[i:j])


class Laurent:
    """Laurent polynomial with integer coefficients, stored densely from its
    lowest exponent.  Zero is ``low == 0, c == ()``."""

    __slots__ = ("low", "c")

    def __init__(self, low: int = 0, coeffs: Sequence[int] = ()):
        self.low, self.c = _trim(low, coeffs)

    @classmethod
    def const(cls, n: int) -> "Laurent":
        return cls(0, (n,))

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "Laurent":
        return cls(exp, (coeff,))

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "Laurent":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return ZERO
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)])

    def terms(self) -> list[tuple[int, int]]:
        return [(self.low + i, a) for i, a in enumerate(self.c) if a]

    @property
    def high(self) -> int:
        return self.low + len(self.c) - 1

    @property
    def span(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def is_unit(self) -> bool:
        return len(self.c) == 1 and abs(self.c[0]) == 1

    def coeff(self, k: int) -> int:
        i = k - self.low
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.low == other.low and self.c == other.c

    def __hash__(self):
        return hash((self.low, self.c))

    def __bool__(self):
        return bool(self.c)

    def __neg__(self) -> "Laurent":
        return Laurent(self.low, [-a for a in self.c])

    def __add__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        if not self.c:
            return other
        if not other.c:
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        o = self.low - lo
        for i, a in enumerate(self.c):
            out[o + i] += a
        o = other.low - lo
        for i, a in enumerate(other.c):
            out[o + i] += a
        return Laurent(lo, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, int):
            return Laurent(self.low, [a * other for a in self.c]) if other else ZERO
        if not self.c or not other.c:
            return ZERO
        a, b = self.c, other.c
        if len(a) == 1:
            x = a[0]
            return Laurent(self.low + other.low, [x * y for y in b])
        if len(b) == 1:
            y = b[0]
            return Laurent(self.low + other.low, [x * y for x in a])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Laurent(self.low + other.low, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Laurent":
        """Multiply by ``s^k``."""
        if not self.c:
            return self
        return Laurent(self.low + k, self.c)

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            if self.is_unit():
                return Laurent(-self.low * (-n), (self.c[0] ** (-n),))
            raise ValueError("negative power of a non-unit")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def evaluate(self, x: int) -> int:
        """Substitute ``s -> x`` for ``x`` in {+1, -1}."""
        if x not in (1, -1):
            raise ValueError("only s -> +1 or s -> -1 is a ring map to Z")
        if x == 1:
            return sum(self.c)
        return sum(a if (self.low + i) % 2 == 0 else -a for i, a in enumerate(self.c))

    def evaluate_mod(self, p: int, u: int) -> int:
        """Image in F_p under ``s -> u`` (``u`` a unit mod ``p``)."""
        if not self.c:
            return 0
        total = 0
        x = pow(u, self.low, p)
        for a in self.c:
            total = (total + a * x) % p
            x = (x * u) % p
        return total

    def content(self) -> int:
        g = 0
        for a in self.c:
            g = gcd(g, a)
        return g

    def normalized(self) -> "Laurent":
        """Canonical associate: lowest exponent 0 and positive lowest coefficient."""
        if not self.c:
            return self
        if self.c[0] < 0:
            return Laurent(0, [-a for a in self.c])
        return Laurent(0, self.c)

    def exact_div(self, other: "Laurent") -> "Laurent | None":
        """``self / other`` in Z[s, 1/s], or None if it is not exact."""
        if not other.c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.c:
            return ZERO
        b = other.c
        r = list(self.c)
        db = len(b) - 1
        if len(r) - 1 < db:
            return None
        q = [0] * (len(r) - db)
        lb = b[-1]
        for k in range(len(r) - 1, db - 1, -1):
            x = r[k]
            if not x:
                continue
            if x % lb:
                return None
            t = x // lb
            q[k - db] = t
            for j in range(db + 1):
                r[k - db + j] -= t * b[j]
        if any(r):
            return None
        return Laurent(self.low - other.low, q)

    def text(self) -> str:
        if not self.c:
            return "0"
        return " + ".join(f"{a}*s^{k}" for k, a in self.terms())

    __str__ = text

    def __repr__(self) -> str:
        return f"Laurent({self.text()})"

    def to_json(self) -> str:
        return self.text()


ZERO = Laurent()
ONE = Laurent(0, (1,))
SIGMA = Laurent(1, (1,))

_TERM = re.compile(r"^\s*(-?\d+)\s*\*\s*s\^\s*(-?\d+)\s*$")


def parse_laurent(text: str) -> Laurent:
    """Inverse of :meth:`Laurent.text`."""
    text = text.strip()
    if text == "0":
        return ZERO
    terms: dict[int, int] = {}
    for part in text.split(" + "):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"malformed Laurent term {part!r}")
        c, k = int(m.group(1)), int(m.group(2))
        terms[k] = terms.get(k, 0) + c
    return Laurent.from_dict(terms)


# ---------------------------------------------------------------------------
# gcd and resultants in Z[s]
# ---------------------------------------------------------------------------

def _prem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder, coefficient lists in ascending order, g nonzero."""
    r = f[:]
    dg = len(g) - 1
    lg = g[-1]
    while len(r) - 1 >= dg and any(r):
        lr = r[-1]
        shift = len(r) - 1 - dg
        r = [lg * x for x in r]
        for j in range(dg + 1):
            r[shift + j] -= lr * g[j]
        while r and not r[-1]:
            r.pop()
    return r


def _primitive(f: list[int]) -> list[int]:
    g = 0
    for a in f:
        g = gcd(g, a)
    if g == 0:
        return f
    f = [a // g for a in f]
    if f[-1] < 0:
        f = [-a for a in f]
    return f


def laurent_gcd(a: Laurent, b: Laurent) -> Laurent:
    """gcd in the UFD Z[s, 1/s], normalised (lowest exponent 0, positive lowest coefficient)."""
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    c = gcd(a.content(), b.content())
    f = _primitive(list(a.c))
    g = _primitive(list(b.c))
    if len(f) < len(g):
        f, g = g, f
    while g and len(g) > 1:
        r = _prem(f, g)
        f, g = g, (_primitive(r) if r else [])
    if g:  # constant nonzero remainder: primitive parts are coprime
        f = [1]
    f = _primitive(f)
    out = Laurent(0, [c * x for x in f])
    return out.normalized()


def gcd_many(items: Iterable[Laurent]) -> Laurent:
    g = ZERO
    for x in items:
        g = laurent_gcd(g, x)
        if g.is_unit():
            return ONE
    return g


def resultant(a: Laurent, b: Laurent) -> int:
    """Resultant of the polynomial parts (lowest exponent stripped)."""
    f, g = list(a.c), list(b.c)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0 and n == 0:
        return 1
    size = m + n
    rows = []
    fd, gd = f[::-1], g[::-1]
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return int_det(IntMatrix.from_rows(rows, size))


# ---------------------------------------------------------------------------
# Z[G] for general finitely generated abelian G
# ---------------------------------------------------------------------------

class GroupRingElement:
    """Finite integer combination of group elements (``terms``: coords -> coefficient)."""

    __slots__ = ("group", "terms")

    def __init__(self, group: Group, terms: dict | None = None):
        self.group = group
        clean: dict[tuple[int, ...], int] = {}
        for g, c in (terms or {}).items():
            g = group.reduce(g)
            clean[g] = clean.get(g, 0) + c
        self.terms = {g: c for g, c in clean.items() if c}

    @classmethod
    def element(cls, group: Group, coords: Sequence[int], coeff: int = 1) -> "GroupRingElement":
        return cls(group, {tuple(coords): coeff})

    def _check(self, other: "GroupRingElement"):
        if self.group != other.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElement(self.group, {self.group.identity(): other})
        self._check(other)
        t = dict(self.terms)
        for g, c in other.terms.items():
            t[g] = t.get(g, 0) + c
        return GroupRingElement(self.group, t)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroupRingElement(self.group, {self.group.identity(): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, {g: c * other for g, c in self.terms.items()})
        self._check(other)
        t: dict = {}
        grp = self.group
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = grp.add(g, h)
                t[k] = t.get(k, 0) + a * b
        return GroupRingElement(grp, t)

    __rmul__ = __mul__

    def shift(self, g: Sequence[int]) -> "GroupRingElement":
        """Multiply by the group element ``g``."""
        grp = self.group
        return GroupRingElement(grp, {grp.add(h, g): c for h, c in self.terms.items()})

    def augmentation(self) -> int:
        """Image under the trivial character (all group elements -> 1)."""
        return sum(self.terms.values())

    def to_laurent(self) -> Laurent:
        if not self.group.is_integers:
            raise ValueError("only Z[Z] elements are Laurent polynomials")
        return Laurent.from_dict({g[0]: c for g, c in self.terms.items()})

    def text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*g^[{','.join(map(str, g))}]" for g, c in sorted(self.terms.items()))

    __str__ = text

    def __repr__(self):
        return f"GroupRingElement({self.text()})"


def ring_zero(group: Group):
    return ZERO if group.is_integers else GroupRingElement(group)


def ring_one(group: Group):
    return ONE if group.is_integers else GroupRingElement(group, {group.identity(): 1})


def ring_element(group: Group, coords: Sequence[int], coeff: int = 1):
    if group.is_integers:
        return Laurent.monomial(coeff, coords[0])
    return GroupRingElement.element(group, coords, coeff)


def element_text(x) -> str:
    return x.text()


# ---------------------------------------------------------------------------
# Matrices over Z[G]
# ---------------------------------------------------------------------------

class LaurentMatrix:
    """Dense matrix over Z[G]; entries are :class:`Laurent` when G = Z and
    :class:`GroupRingElement` otherwise."""

    __slots__ = ("group", "rows", "cols", "data")

    def __init__(self, group: Group, rows: int, cols: int, data=None):
        self.group = group
        self.rows = rows
        self.cols = cols
        if data is None:
            z = ring_zero(group)
            data = [[z] * cols for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.data = data

    @classmethod
    def from_rows(cls, rows, group: Group = INTEGERS, cols: int | None = None) -> "LaurentMatrix":
        conv = []
        for r in rows:
            conv.append([_coerce(x, group) for x in r])
        if cols is None:
            cols = len(conv[0]) if conv else 0
        return cls(group, len(conv), cols, conv)

    @classmethod
    def identity(cls, n: int, group: Group = INTEGERS) -> "LaurentMatrix":
        z, o = ring_zero(group), ring_one(group)
        return cls(group, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_int(cls, a: IntMatrix, group: Group = INTEGERS) -> "LaurentMatrix":
        return cls.from_rows(a.data, group, a.cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "LaurentMatrix":
        if not self.rows:
            return LaurentMatrix(self.group, self.cols, 0, [[] for _ in range(self.cols)])
        return LaurentMatrix(self.group, self.cols, self.rows, [list(c) for c in zip(*self.data)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.group == other.group and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def _check(self, other: "LaurentMatrix"):
        if self.group != other.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return LaurentMatrix(self.group, self.rows, self.cols,
                             [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return LaurentMatrix(self.group, self.rows, self.cols,
                             [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self):
        return LaurentMatrix(self.group, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = ring_zero(self.group)
        out = []
        ocols = other.columns()
        for r in self.data:
            row = []
            for col in ocols:
                acc = z
                for a, b in zip(r, col):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(self.group, self.rows, other.cols, out)

    def scale(self, x) -> "LaurentMatrix":
        return LaurentMatrix(self.group, self.rows, self.cols, [[a * x for a in r] for r in self.data])

    def apply(self, vec: Sequence) -> list:
        z = ring_zero(self.group)
        out = []
        for r in self.data:
            acc = z
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def hstack(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return LaurentMatrix(self.group, self.rows, self.cols + other.cols,
                             [r + s for r, s in zip(self.data, other.data)])

    def is_zero(self) -> bool:
        return not any(any(bool(x) for x in r) for r in self.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix(self.group, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    def map_int(self, f) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, [[f(x) for x in r] for r in self.data])

    def text_rows(self) -> list[list[str]]:
        return [[x.text() for x in r] for r in self.data]

    def __repr__(self):
        return f"LaurentMatrix({self.rows}x{self.cols}, {self.text_rows()})"


def _coerce(x, group: Group):
    if isinstance(x, int):
        return ring_one(group) * x if x else ring_zero(group)
    if isinstance(x, str):
        if not group.is_integers:
            raise ValueError("text parsing is only defined for Laurent polynomials")
        return parse_laurent(x)
    return x


def kron(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    a._check(b)
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a.data[i][j] * b.data[k][l] for j in range(a.cols) for l in range(b.cols)])
    return LaurentMatrix(a.group, a.rows * b.rows, a.cols * b.cols, rows)


def evaluate_at_unit(m: LaurentMatrix, u: int) -> IntMatrix:
    """Entrywise ring map ``Z[s, 1/s] -> Z``, ``s -> u`` with ``u = +1`` or ``-1``."""
    if not m.group.is_integers:
        raise ValueError(f"evaluation at s = {u} needs the infinite cyclic weight group, not {m.group}")
    if u not in (1, -1):
        raise ValueError(f"s -> {u} is not a ring map to Z; use +1 or -1")
    return m.map_int(lambda x: x.evaluate(u))


def augment(m: LaurentMatrix) -> IntMatrix:
    """Entrywise augmentation ``Z[G] -> Z`` (every group element -> 1)."""
    if m.group.is_integers:
        return m.map_int(lambda x: x.evaluate(1))
    return m.map_int(lambda x: x.augmentation())


def laurent_det(m: LaurentMatrix) -> Laurent:
    """Determinant over Z[s, 1/s] (Bareiss with exact division)."""
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    if n == 1:
        return m.data[0][0]
    if n == 2:
        (a, b), (c, d) = m.data
        return a * d - b * c
    M = [r[:] for r in m.data]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            for j in range(k + 1, n):
                num = pk * M[i][j] - aik * M[k][j]
                q = num.exact_div(prev)
                if q is None:
                    raise ArithmeticError("Bareiss step was not exact")
                M[i][j] = q
        prev = pk
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def minors(m: LaurentMatrix, k: int):
    """All k x k minors, rows and columns in lexicographic order."""
    for rs in combinations(range(m.rows), k):
        for cs in combinations(range(m.cols), k):
            yield laurent_det(m.submatrix(rs, cs))


def gcd_of_minors(m: LaurentMatrix, k: int) -> Laurent:
    """Normalised gcd of the k x k minors (1 for k <= 0, 0 when there are none)."""
    if k <= 0:
        return ONE
    if k > min(m.rows, m.cols):
        return ZERO
    return gcd_many(minors(m, k))


def gcd_of_maximal_minors(m: LaurentMatrix) -> Laurent:
    if not m.group.is_integers:
        raise ValueError("minor gcds need G = Z")
    return gcd_of_minors(m, min(m.rows, m.cols))


def adjugate(m: LaurentMatrix) -> LaurentMatrix:
    n = m.rows
    if n == 0:
        return LaurentMatrix(m.group, 0, 0)
    if n == 1:
        return LaurentMatrix.identity(1, m.group)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rs = [r for r in range(n) if r != j]
            cs = [c for c in range(n) if c != i]
            d = laurent_det(m.submatrix(rs, cs))
            out[i][j] = d if (i + j) % 2 == 0 else -d
    return LaurentMatrix(m.group, n, n, out)


class InjectiveSolver:
    """Exact membership in the image of an injective matrix over Z[s, 1/s].

    A nonzero maximal minor is fixed once; ``solve(z)`` returns the unique
    ``y`` with ``m y = z`` (adjugate formula, exact division, re-check), or
    None when ``z`` is not in the image.
    """

    def __init__(self, m: LaurentMatrix):
        if not m.group.is_integers:
            raise ValueError("InjectiveSolver needs G = Z")
        self.m = m
        c = m.cols
        self.rows_used: tuple[int, ...] | None = None
        if c == 0:
            self.rows_used = ()
            self.det = ONE
            self.adj = LaurentMatrix(m.group, 0, 0)
            return
        for rs in combinations(range(m.rows), c):
            sub = m.submatrix(rs, range(c))
            d = laurent_det(sub)
            if not d.is_zero():
                self.rows_used = rs
                self.det = d
                self.adj = adjugate(sub)
                return
        raise ValueError("matrix is not injective over Q(s): every maximal minor vanishes")

    def solve(self, z: Sequence[Laurent]) -> list[Laurent] | None:
        m = self.m
        if m.cols == 0:
            return [] if all(x.is_zero() for x in z) else None
        zs = [z[i] for i in self.rows_used]
        y = []
        for row in self.adj.data:
            acc = ZERO
            for a, b in zip(row, zs):
                if a and b:
                    acc = acc + a * b
            q = acc.exact_div(self.det)
            if q is None:
                return None
            y.append(q)
        if m.apply(y) != list(z):
            return None
        return y

    def contains(self, z: Sequence[Laurent]) -> bool:
        return self.solve(z) is not None


# ---------------------------------------------------------------------------
# Laurent polynomials over a field: Q (modulus 0) or F_p
# ---------------------------------------------------------------------------

class FieldLaurent:
    """Laurent polynomial over Q (``modulus == 0``, Fraction coefficients) or F_p."""

    __slots__ = ("modulus", "low", "c")

    def __init__(self, modulus: int, low: int = 0, coeffs: Sequence = ()):
        self.modulus = modulus
        if modulus:
            coeffs = [int(a) % modulus for a in coeffs]
        else:
            coeffs = [Fraction(a) for a in coeffs]
        self.low, self.c = _trim(low, coeffs)

    @classmethod
    def from_laurent(cls, x: Laurent, modulus: int) -> "FieldLaurent":
        return cls(modulus, x.low, x.c)

    @classmethod
    def const(cls, modulus: int, a) -> "FieldLaurent":
        return cls(modulus, 0, (a,))

    def _new(self, low, coeffs) -> "FieldLaurent":
        out = FieldLaurent.__new__(FieldLaurent)
        out.modulus = self.modulus
        if self.modulus:
            coeffs = [a % self.modulus for a in coeffs]
        out.low, out.c = _trim(low, coeffs)
        return out

    @property
    def high(self) -> int:
        return self.low + len(self.c) - 1

    @property
    def span(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def is_unit(self) -> bool:
        return len(self.c) == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldLaurent):
            return NotImplemented
        return self.modulus == other.modulus and self.low == other.low and tuple(self.c) == tuple(other.c)

    def __hash__(self):
        return hash((self.modulus, self.low, tuple(self.c)))

    def __neg__(self):
        return self._new(self.low, [-a for a in self.c])

    def __add__(self, other: "FieldLaurent") -> "FieldLaurent":
        if not self.c:
            return other
        if not other.c:
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for i, a in enumerate(self.c):
            out[self.low - lo + i] += a
        for i, a in enumerate(other.c):
            out[other.low - lo + i] += a
        return self._new(lo, out)

    def __sub__(self, other: "FieldLaurent") -> "FieldLaurent":
        return self + (-other)

    def __mul__(self, other: "FieldLaurent") -> "FieldLaurent":
        if not self.c or not other.c:
            return self._new(0, ())
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return self._new(self.low + other.low, out)

    def _inv_scalar(self, a):
        return pow(a, -1, self.modulus) if self.modulus else Fraction(1) / a

    def inverse_unit(self) -> "FieldLaurent":
        if not self.is_unit():
            raise ValueError("not a unit")
        return self._new(-self.low, [self._inv_scalar(self.c[0])])

    def divmod(self, other: "FieldLaurent") -> tuple["FieldLaurent", "FieldLaurent"]:
        """Euclidean division with ``span(r) < span(other)``."""
        if not other.c:
            raise ZeroDivisionError
        if not self.c:
            return self, self
        b = other.c
        db = len(b) - 1
        r = list(self.c)
        if len(r) - 1 < db:
            return self._new(0, ()), self
        inv = self._inv_scalar(b[-1])
        q = [0] * (len(r) - db)
        p = self.modulus
        for k in range(len(r) - 1, db - 1, -1):
            x = r[k]
            if p:
                x %= p
            if not x:
                continue
            t = x * inv
            if p:
                t %= p
            q[k - db] = t
            for j in range(db + 1):
                r[k - db + j] -= t * b[j]
        return self._new(self.low - other.low, q), self._new(self.low, r[:db])

    def monic_normalized(self) -> tuple["FieldLaurent", "FieldLaurent"]:
        """``(unit, n)`` with ``self == unit * n``, ``n`` monic with lowest exponent 0."""
        if not self.c:
            return self._new(0, (1,)), self
        lead = self.c[-1]
        inv = self._inv_scalar(lead)
        n = self._new(0, [a * inv for a in self.c])
        unit = self._new(self.low, [lead])
        return unit, n

    def text(self) -> str:
        if not self.c:
            return "0"
        return " + ".join(f"{a}*s^{self.low + i}" for i, a in enumerate(self.c) if a)

    __str__ = text

    def __repr__(self):
        return f"FieldLaurent(mod {self.modulus}: {self.text()})"


class FieldLaurentMatrix:
    """Matrix over Q[s, 1/s] (``modulus == 0``) or F_p[s, 1/s]."""

    __slots__ = ("modulus", "rows", "cols", "data")

    def __init__(self, modulus: int, rows: int, cols: int, data=None):
        self.modulus = modulus
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [[FieldLaurent(modulus)] * cols for _ in range(rows)]
        self.data = data

    @classmethod
    def identity(cls, modulus: int, n: int) -> "FieldLaurentMatrix":
        one, zero = FieldLaurent.const(modulus, 1), FieldLaurent(modulus)
        return cls(modulus, n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        if not isinstance(other, FieldLaurentMatrix):
            return NotImplemented
        return (self.modulus, self.rows, self.cols) == (other.modulus, other.rows, other.cols) and self.data == other.data

    def __matmul__(self, other: "FieldLaurentMatrix") -> "FieldLaurentMatrix":
        if self.cols != other.rows or self.modulus != other.modulus:
            raise ValueError("shape or field mismatch")
        zero = FieldLaurent(self.modulus)
        out = []
        for r in self.data:
            row = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(r):
                    b = other.data[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return FieldLaurentMatrix(self.modulus, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(any(bool(x) for x in r) for r in self.data)

    def text_rows(self):
        return [[x.text() for x in r] for r in self.data]

    def __repr__(self):
        return f"FieldLaurentMatrix(mod {self.modulus}, {self.text_rows()})"


def specialize_mod_p(m: LaurentMatrix, p: int, u: int | None = None):
    """Reduce coefficients mod ``p``.  With ``u`` given, also send ``s -> u``
    and return an :class:`IntMatrix` with entries in ``[0, p)``; otherwise
    return a :class:`FieldLaurentMatrix` over F_p[s, 1/s]."""
    if not m.group.is_integers:
        raise ValueError("specialisation needs G = Z")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if u is not None:
        if u % p == 0:
            raise ValueError(f"{u} is not a unit mod {p}")
        return m.map_int(lambda x: x.evaluate_mod(p, u % p))
    return to_field(m, p)


def to_field(m: LaurentMatrix, modulus: int) -> FieldLaurentMatrix:
    """Base change to Q[s, 1/s] (``modulus == 0``) or F_p[s, 1/s]."""
    if modulus != 0 and not is_prime(modulus):
        raise ValueError(f"{modulus} is neither 0 nor a prime")
    return FieldLaurentMatrix(modulus, m.rows, m.cols,
                              [[FieldLaurent.from_laurent(x, modulus) for x in r] for r in m.data])


class PidSnf:
    """``u @ m @ v == d`` over a Laurent PID; ``d`` diagonal, normalised
    (monic, lowest exponent 0) with each entry dividing the next."""

    __slots__ = ("d", "u", "v")

    def __init__(self, d, u, v):
        self.d, self.u, self.v = d, u, v

    @property
    def diagonal(self) -> list[FieldLaurent]:
        return [self.d.data[i][i] for i in range(min(self.d.rows, self.d.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def snf_over_pid(m: FieldLaurentMatrix, track: bool = True) -> PidSnf:
    """Smith normal form over Q[s, 1/s] or F_p[s, 1/s] with certificates."""
    p = m.modulus
    R, C = m.rows, m.cols
    M = [r[:] for r in m.data]
    one, zero = FieldLaurent.const(p, 1), FieldLaurent(p)
    U = [[one if i == j else zero for j in range(R)] for i in range(R)] if track else None
    V = [[one if i == j else zero for j in range(C)] for i in range(C)] if track else None

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in M:
            r[j], r[k] = r[k], r[j]
        if track:
            for r in V:
                r[j], r[k] = r[k], r[j]

    def row_axpy(dst, src, q):
        M[dst] = [a - q * b if b else a for a, b in zip(M[dst], M[src])]
        if track:
            U[dst] = [a - q * b if b else a for a, b in zip(U[dst], U[src])]

    def col_axpy(dst, src, q):
        for r in M:
            if r[src]:
                r[dst] = r[dst] - q * r[src]
        if track:
            for r in V:
                if r[src]:
                    r[dst] = r[dst] - q * r[src]

    t = 0
    while t < min(R, C):
        best = None
        for i in range(t, R):
            for j in range(t, C):
                x = M[i][j]
                if x and (best is None or x.span < best[0]):
                    best = (x.span, i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, R):
                if M[i][t]:
                    q, _ = M[i][t].divmod(piv)
                    row_axpy(i, t, q)
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, C):
                if M[t][j]:
                    q, _ = M[t][j].divmod(piv)
                    col_axpy(j, t, q)
                    if M[t][j]:
                        dirty = True
            if dirty:
                cand = [(M[i][t].span, i, t) for i in range(t + 1, R) if M[i][t]]
                cand += [(M[t][j].span, t, j) for j in range(t + 1, C) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                else:
                    swap_cols(j, t)
                continue
            bad = None
            if not piv.is_unit():
                for i in range(t + 1, R):
                    for j in range(t + 1, C):
                        x = M[i][j]
                        if x and x.divmod(piv)[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            row_axpy(t, bad, FieldLaurent.const(p, -1))
        unit, norm = M[t][t].monic_normalized()
        inv = unit.inverse_unit()
        M[t] = [x * inv if x else x for x in M[t]]
        if track:
            U[t] = [x * inv if x else x for x in U[t]]
        t += 1
    d = FieldLaurentMatrix(p, R, C, M)
    if not track:
        return PidSnf(d, None, None)
    return PidSnf(d, FieldLaurentMatrix(p, R, R, U), FieldLaurentMatrix(p, C, C, V))


def rank_over_field_laurent(m: LaurentMatrix, modulus: int) -> int:
    """Rank over Q(s) or F_p(s)."""
    return snf_over_pid(to_field(m, modulus), track=False).rank


def rank_mod_p(a: IntMatrix, p: int) -> int:
    """Rank over F_p of an integer matrix."""
    M = [[x % p for x in r] for r in a.data]
    rows, cols = a.rows, a.cols
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def window_matrix(m: LaurentMatrix, in_lo: int, in_hi: int, out_lo: int, out_hi: int) -> IntMatrix:
    """Integer matrix of ``m`` restricted to inputs of degree in ``[in_lo, in_hi]``.

    Input coordinate ``(j, t)`` sits at column ``j * (in_hi - in_lo + 1) + t - in_lo``,
    output ``(i, k)`` at row ``i * (out_hi - out_lo + 1) + k - out_lo``.  Raises if
    some image term falls outside the output window.
    """
    nin = max(in_hi - in_lo + 1, 0)
    nout = max(out_hi - out_lo + 1, 0)
    out = IntMatrix(m.rows * nout, m.cols * nin)
    for i, row in enumerate(m.data):
        for j, x in enumerate(row):
            if not x:
                continue
            for e, c in x.terms():
                for t in range(in_lo, in_hi + 1):
                    k = t + e
                    if not out_lo <= k <= out_hi:
                        raise ValueError("output window too small for window_matrix")
                    out.data[i * nout + k - out_lo][j * nin + t - in_lo] += c
    return out


def degree_range(m: LaurentMatrix) -> tuple[int, int]:
    """Smallest and largest exponent occurring in ``m`` (``(0, 0)`` for a zero matrix)."""
    lows = [x.low for r in m.data for x in r if x]
    highs = [x.high for r in m.data for x in r if x]
    if not lows:
        return 0, 0
    return min(lows), max(highs)


def laurent_vector_to_window(vec: Sequence[Laurent], lo: int, hi: int) -> list[int]:
    n = hi - lo + 1
    out = [0] * (len(vec) * n)
    for i, x in enumerate(vec):
        for e, c in x.terms():
            if not lo <= e <= hi:
                raise ValueError("vector does not fit in the window")
            out[i * n + e - lo] = c
    return out


def window_to_laurent_vector(flat: Sequence[int], count: int, lo: int, hi: int) -> list[Laurent]:
    n = hi - lo + 1
    return [Laurent(lo, flat[i * n:(i + 1) * n]) for i in range(count)]
