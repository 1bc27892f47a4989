"""Exact dense linear algebra over Z[q], its fraction field, Q, and Z.

This module is the referee for the closed-form constructions elsewhere in the
package: it only knows generic elimination algorithms (fraction-free Bareiss,
Gauss-Jordan over the fraction field, Sturm sequences) and never builds any of
the structured matrices itself.

Matrices and vectors carry index-kind metadata ("L", "R", "Vertex") so that a
product with mismatched row/column semantics fails loudly instead of silently
transposing.
"""

from __future__ import annotations

from fractions import Fraction

from .polyalg import ONE, ZERO, Poly, RatFun, divexact, poly_gcd

KIND_L = "L"
KIND_R = "R"
KIND_VERTEX = "Vertex"


class DimensionMismatch(ValueError):
    pass


class IndexKindMismatch(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


class Vector:
    __slots__ = ("entries", "kind")

    def __init__(self, entries, kind: str):
        self.entries = tuple(entries)
        self.kind = kind

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.kind == other.kind and self.entries == other.entries

    def __repr__(self):
        return f"Vector({list(self.entries)!r}, kind={self.kind!r})"

    def map(self, fn) -> "Vector":
        return Vector((fn(e) for e in self.entries), self.kind)

    def scale(self, s) -> "Vector":
        return Vector((s * e for e in self.entries), self.kind)

    def sum(self):
        total = self.entries[0]
        for e in self.entries[1:]:
            total = total + e
        return total

    def to_json(self) -> dict:
        return {
            "length": len(self.entries),
            "kind": self.kind,
            "entries": [_entry_json(e) for e in self.entries],
        }


class Matrix:
    """Dense matrix; entries may be Poly, RatFun, Fraction, or int."""

    __slots__ = ("rows", "cols", "row_kind", "col_kind", "entries")

    def __init__(self, entries, row_kind: str, col_kind: str):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise DimensionMismatch("empty matrix")
        width = len(entries[0])
        if any(len(row) != width for row in entries):
            raise DimensionMismatch("ragged rows")
        self.entries = entries
        self.rows = len(entries)
        self.cols = width
        self.row_kind = row_kind
        self.col_kind = col_kind

    @classmethod
    def identity(cls, n: int, row_kind: str, col_kind: str, one=ONE, zero=ZERO):
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)],
            row_kind,
            col_kind,
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.row_kind == other.row_kind
            and self.col_kind == other.col_kind
            and self.entries == other.entries
        )

    def __repr__(self):
        return (
            f"Matrix({self.rows}x{self.cols}, {self.row_kind}x{self.col_kind})"
        )

    def map(self, fn) -> "Matrix":
        return Matrix(
            ((fn(e) for e in row) for row in self.entries),
            self.row_kind,
            self.col_kind,
        )

    def scale(self, s) -> "Matrix":
        return self.map(lambda e: s * e)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"{self!r} + {other!r}")
        if (self.row_kind, self.col_kind) != (other.row_kind, other.col_kind):
            raise IndexKindMismatch(f"{self!r} + {other!r}")
        return Matrix(
            (
                (a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            self.row_kind,
            self.col_kind,
        )

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        if isinstance(other, Vector):
            return mat_vec(self, other)
        return NotImplemented

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.entries), self.col_kind, self.row_kind)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "row_kind": self.row_kind,
            "col_kind": self.col_kind,
            "entries": [[_entry_json(e) for e in row] for row in self.entries],
        }


def _entry_json(e):
    if isinstance(e, (Poly, RatFun)):
        return e.to_json()
    if isinstance(e, Fraction):
        return str(e)
    return str(e)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product with index-kind checking."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a!r} @ {b!r}")
    if a.col_kind != b.row_kind:
        raise IndexKindMismatch(
            f"columns of {a!r} are {a.col_kind}-indexed but rows of {b!r} "
            f"are {b.row_kind}-indexed"
        )
    bt = list(zip(*b.entries))
    out = []
    for row in a.entries:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return Matrix(out, a.row_kind, b.col_kind)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    if a.cols != len(v):
        raise DimensionMismatch(f"{a!r} @ {v!r}")
    if a.col_kind != v.kind:
        raise IndexKindMismatch(f"{a!r} @ {v!r}")
    out = []
    for row in a.entries:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v.entries[1:]):
            acc = acc + x * y
        out.append(acc)
    return Vector(out, a.row_kind)


def vec_mat(v: Vector, a: Matrix) -> Vector:
    if a.rows != len(v):
        raise DimensionMismatch(f"{v!r} @ {a!r}")
    if a.row_kind != v.kind:
        raise IndexKindMismatch(f"{v!r} @ {a!r}")
    out = []
    for j in range(a.cols):
        acc = v[0] * a.entries[0][j]
        for i in range(1, a.rows):
            acc = acc + v[i] * a.entries[i][j]
        out.append(acc)
    return Vector(out, a.col_kind)


def outer(u: Vector, v: Vector) -> Matrix:
    return Matrix(
        ((x * y for y in v.entries) for x in u.entries), u.kind, v.kind
    )


# ---------------------------------------------------------------------------
# determinants and inverses
# ---------------------------------------------------------------------------


def det_bareiss(m: Matrix) -> Poly:
    """Determinant by fraction-free Bareiss elimination over Z[q].

    Every interior division is exact (a classical property of the Bareiss
    recurrence), so all intermediate values stay in the polynomial ring.
    """
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    a = [[_as_ring_poly(e) for e in row] for row in m.entries]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = divexact(pivot * a[i][j] - a[i][k] * a[k][j], prev)
            a[i][k] = ZERO
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def _as_ring_poly(e):
    if isinstance(e, Poly):
        return e
    if isinstance(e, (int, Fraction)):
        return Poly((_as_int(e),))
    raise TypeError(f"ring elimination needs Poly or int entries, got {type(e)}")


def _as_int(e) -> int:
    if isinstance(e, int):
        return e
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e)
    raise TypeError(f"expected an exact integer entry, got {e!r}")


def inverse_gauss(m: Matrix) -> Matrix:
    """Inverse by Gauss-Jordan over the rational-function field.

    Pivots are chosen by lowest combined numerator/denominator degree; the
    cost driver here is polynomial degree growth, not numerical error.
    """
    if not m.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    a = [
        [_as_field(e) for e in row]
        + [RatFun(ONE) if i == j else RatFun(ZERO) for j in range(n)]
        for i, row in enumerate(m.entries)
    ]
    for col in range(n):
        best = None
        for i in range(col, n):
            e = a[i][col]
            if e:
                size = e.num.degree() + e.den.degree()
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            raise SingularMatrix(f"no pivot in column {col}")
        _, piv = best
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [e * inv for e in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return Matrix((row[n:] for row in a), m.col_kind, m.row_kind)


def _as_field(e):
    if isinstance(e, RatFun):
        return e
    if isinstance(e, (Poly, int)):
        return RatFun(e)
    raise TypeError(f"field elimination needs RatFun/Poly/int entries, got {type(e)}")


def adjugate_int(m: Matrix) -> Matrix:
    """Exact adjugate of an integer matrix via cofactor determinants."""
    if not m.is_square():
        raise DimensionMismatch("adjugate of a non-square matrix")
    n = m.rows
    if n == 1:
        return Matrix([[1]], m.col_kind, m.row_kind)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [m.entries[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            d = det_bareiss(Matrix(minor, m.row_kind, m.col_kind))
            cof = d[0] if (i + j) % 2 == 0 else -d[0]
            out[j][i] = cof
    return Matrix(out, m.col_kind, m.row_kind)


def rank_int(m: Matrix) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [[Fraction(e) for e in row] for row in m.entries]
    rows, cols = m.rows, m.cols
    rank = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [e * inv for e in a[rank]]
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def charpoly_exact(m: Matrix) -> Poly:
    """Characteristic polynomial det(xI - m) of an integer matrix.

    Returned as a Poly in the spectral variable (coefficients ascending).
    """
    if not m.is_square():
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    lam = Poly((0, 1))
    shifted = Matrix(
        (
            (
                lam - _as_int(e) if i == j else Poly((-_as_int(e),))
                for j, e in enumerate(row)
            )
            for i, row in enumerate(m.entries)
        ),
        m.row_kind,
        m.col_kind,
    )
    return det_bareiss(shifted)


# ---------------------------------------------------------------------------
# exact spectral tools
# ---------------------------------------------------------------------------


def squarefree_part(p: Poly) -> Poly:
    """p / gcd(p, p'), primitive with positive leading coefficient."""
    if not p:
        raise ValueError("squarefree part of the zero polynomial")
    if p.degree() == 0:
        return ONE
    g = poly_gcd(p, p.derivative())
    return divexact(p, g).primitive_part()


def annihilates(m: Matrix, p: Poly) -> bool:
    """Exact test of p(m) == 0 by Horner iteration with integer matrices."""
    if not m.is_square():
        raise DimensionMismatch("polynomial of a non-square matrix")
    n = m.rows
    acc = [[0] * n for _ in range(n)]
    ints = [[_as_int(e) for e in row] for row in m.entries]
    for c in reversed(p.coeffs):
        nxt = [
            [
                sum(acc[i][k] * ints[k][j] for k in range(n))
                + (c if i == j else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        acc = nxt
    return all(all(e == 0 for e in row) for row in acc)


def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm sequence of a squarefree polynomial.

    Remainders are computed by positively-scaled pseudo-division and stripped
    to their (sign-preserving) primitive form; positive scaling leaves sign
    variations untouched.
    """
    chain = [p, p.derivative()]
    while chain[-1]:
        r = _neg_rem_positive(chain[-2], chain[-1])
        chain.append(r)
    chain.pop()
    return chain


def _neg_rem_positive(a: Poly, b: Poly) -> Poly:
    if a.degree() < b.degree():
        return -a
    lead = abs(b.leading())
    rem = list(a.coeffs)
    db = b.degree()
    sign = 1 if b.leading() > 0 else -1
    for i in range(len(a.coeffs) - len(b.coeffs), -1, -1):
        c = rem[i + db]
        for j in range(len(rem)):
            rem[j] *= lead
        for j, bc in enumerate(b.coeffs):
            rem[i + j] -= sign * c * bc
    r = Poly(rem[:db] if db > 0 else [])
    if not r:
        return r
    content = r.content()
    return -Poly(c // content for c in r.coeffs)


def _sign_at(p: Poly, x) -> int:
    if x is _NEG_INF:
        s = p.leading()
        if p.degree() % 2:
            s = -s
    elif x is _POS_INF:
        s = p.leading()
    else:
        s = p.eval_at(x)
    return (s > 0) - (s < 0)


def _variations(chain, x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


class _Inf:
    pass


_NEG_INF = _Inf()
_POS_INF = _Inf()


def count_real_roots(
    p: Poly,
    lo=None,
    hi=None,
    *,
    include_lo: bool = False,
    include_hi: bool = True,
) -> int:
    """Distinct real roots of a squarefree polynomial in an interval.

    The base convention is the half-open interval (lo, hi]; ``None`` bounds
    mean -oo / +oo, and the include flags adjust the finite endpoints.
    """
    if not p:
        raise ValueError("root counting needs a nonzero polynomial")
    if p.degree() == 0:
        return 0
    chain = sturm_chain(p)
    a = _NEG_INF if lo is None else Fraction(lo)
    b = _POS_INF if hi is None else Fraction(hi)
    count = _variations(chain, a) - _variations(chain, b)
    if lo is not None and include_lo and p.eval_at(lo) == 0:
        count += 1
    if hi is not None and not include_hi and p.eval_at(hi) == 0:
        count -= 1
    return count


def conjecture_evidence(m: Matrix) -> dict:
    """Exact spectral evidence for an integer matrix.

    diagonalizable: the squarefree part of the characteristic polynomial
    annihilates the matrix.  all_eigen_nonneg: every eigenvalue is real
    (the squarefree part has as many distinct real roots as its degree)
    and none lies in (-oo, 0).  Both tests are exact; no roots are isolated
    numerically.
    """
    cp = charpoly_exact(m)
    sf = squarefree_part(cp)
    diag = annihilates(m, sf)
    real_roots = count_real_roots(sf)
    all_real = real_roots == sf.degree()
    negative = count_real_roots(sf, hi=0, include_hi=False)
    return {
        "diagonalizable": diag,
        "all_eigen_nonneg": all_real and negative == 0,
        "real_root_count": real_roots,
    }
