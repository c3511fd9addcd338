"""Dense matrices over the polynomial ring.

Exponentials and logarithms are exact finite sums: callers only ever hand
in nilpotent (resp. unipotent) matrices, anything else is an error.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .ring import Poly, RingError

__all__ = [
    "RingMatrix",
    "NotNilpotent",
    "NotUnipotent",
    "Inconsistent",
    "mat_exp_nilpotent",
    "mat_log_unipotent",
    "solve_linear",
    "LinearSolution",
]

ZERO = Poly()
ONE = Poly(1)


class NotNilpotent(RingError):
    pass


class NotUnipotent(RingError):
    pass


class Inconsistent(RingError):
    pass


def _p(x) -> Poly:
    return x if isinstance(x, Poly) else Poly(x)


class RingMatrix:
    """Immutable ``rows x cols`` matrix of :class:`Poly` entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = [[_p(x) for x in row] for row in data]
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix")
        self.rows = len(data)
        self.cols = width
        self.data = tuple(tuple(r) for r in data)

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, entries):
        return cls([[e] for e in entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, RingMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        rows = ["[" + ", ".join(str(x) for x in r) + "]" for r in self.data]
        return "RingMatrix([" + ", ".join(rows) + "])"

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __add__(self, other):
        self._same_shape(other)
        return RingMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        self._same_shape(other)
        return RingMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        return RingMatrix([[-a for a in r] for r in self.data])

    def scale(self, s) -> "RingMatrix":
        s = _p(s)
        return RingMatrix([[a * s for a in r] for r in self.data])

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            return self.matmul(other)
        return self.scale(other)

    __rmul__ = scale

    def matmul(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        cols = list(zip(*other.data))
        out = []
        for r in self.data:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix(out)

    def apply(self, vec):
        """Matrix times a plain sequence of entries."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        vec = [_p(v) for v in vec]
        out = []
        for r in self.data:
            acc = ZERO
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def transpose(self) -> "RingMatrix":
        return RingMatrix(list(zip(*self.data)))

    def map(self, fn) -> "RingMatrix":
        return RingMatrix([[fn(a) for a in r] for r in self.data])

    def substitute(self, bindings) -> "RingMatrix":
        return self.map(lambda a: a.substitute(bindings))

    def power(self, k: int) -> "RingMatrix":
        result = RingMatrix.identity(self.rows)
        for _ in range(k):
            result = result.matmul(self)
        return result

    def nilpotency_order(self, limit=None) -> int | None:
        """Smallest ``k`` with ``M**k == 0`` (``None`` if above ``limit``)."""
        limit = self.rows + 1 if limit is None else limit
        p = RingMatrix.identity(self.rows)
        for k in range(1, limit + 1):
            p = p.matmul(self)
            if p.is_zero():
                return k
        return None

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]"
                         for r in self.data)


def mat_exp_nilpotent(m: RingMatrix, bound: int | None = None) -> RingMatrix:
    """Exact ``exp(m)`` for nilpotent ``m`` with ``m**bound == 0``."""
    if not m.is_square():
        raise ValueError("exponential of a non-square matrix")
    bound = m.rows if bound is None else bound
    result = RingMatrix.identity(m.rows)
    term = RingMatrix.identity(m.rows)
    for k in range(1, bound + 1):
        term = term.matmul(m)
        if term.is_zero():
            return result
        if k == bound:
            break
        result = result + term.scale(Fraction(1, factorial(k)))
    raise NotNilpotent(f"matrix power {bound} does not vanish")


def exp_apply(m: RingMatrix, vec, bound: int | None = None):
    """``exp(m) @ vec`` without forming the full exponential."""
    bound = m.rows + 1 if bound is None else bound
    vec = [_p(v) for v in vec]
    total = list(vec)
    term = vec
    for k in range(1, bound + 1):
        term = [x * Fraction(1, k) for x in m.apply(term)]
        if not any(term):
            return total
        total = [a + b for a, b in zip(total, term)]
    raise NotNilpotent(f"series did not terminate after {bound} terms")


def mat_log_unipotent(u: RingMatrix) -> RingMatrix:
    """Exact ``log(u)`` for unipotent ``u`` (finite Mercator series)."""
    if not u.is_square():
        raise ValueError("logarithm of a non-square matrix")
    n = u.rows
    d = u - RingMatrix.identity(n)
    result = RingMatrix.zeros(n)
    term = RingMatrix.identity(n)
    for k in range(1, n + 1):
        term = term.matmul(d)
        if term.is_zero():
            return result
        sign = 1 if k % 2 else -1
        result = result + term.scale(Fraction(sign, k))
    if not term.matmul(d).is_zero():
        raise NotUnipotent("u - 1 is not nilpotent")
    return result


class LinearSolution:
    """One exact solution of ``A x = b`` plus a kernel basis of ``A``."""

    def __init__(self, x, kernel):
        self.x = x
        self.kernel = kernel

    @property
    def unique(self) -> bool:
        return not self.kernel

    def __iter__(self):
        yield self.x
        yield self.kernel

    def __repr__(self):
        return f"LinearSolution(x={self.x!r}, kernel_dim={len(self.kernel)})"


def _pick_pivot(rows, col, start):
    """Prefer unit pivots (exact division stays in the ring), then the
    sparsest nonzero entry."""
    best = None
    for r in range(start, len(rows)):
        a = rows[r][col]
        if not a:
            continue
        if a.is_unit():
            score = (0, len(a.terms))
        else:
            score = (1, len(a.terms))
        if best is None or score < best[0]:
            best = (score, r)
            if score == (0, 1):
                break
    return None if best is None else best[1]


def solve_linear(a: RingMatrix, b) -> LinearSolution:
    """Solve ``a @ x == b`` exactly.

    Rows are eliminated fraction-free (cross multiplication), so no
    intermediate leaves the ring; the only divisions happen when a pivot
    row is normalised at back-substitution, and they must be exact.
    """
    if isinstance(b, RingMatrix):
        b = [r[0] for r in b.data]
    b = [_p(x) for x in b]
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    n = a.cols
    rows = [list(r) + [rhs] for r, rhs in zip(a.data, b)]
    pivots = []
    r0 = 0
    for col in range(n):
        pr = _pick_pivot(rows, col, r0)
        if pr is None:
            continue
        rows[r0], rows[pr] = rows[pr], rows[r0]
        piv_row = rows[r0]
        piv = piv_row[col]
        unit = piv.is_unit()
        if unit:
            inv = piv.unit_inverse()
            piv_row = [x * inv if x else x for x in piv_row]
            rows[r0] = piv_row
        for r in range(len(rows)):
            if r == r0:
                continue
            f = rows[r][col]
            if not f:
                continue
            if unit:
                rows[r] = [x - f * y if y else x for x, y in zip(rows[r], piv_row)]
            else:
                rows[r] = [x * piv - f * y for x, y in zip(rows[r], piv_row)]
                _content_reduce(rows[r])
        pivots.append(col)
        r0 += 1
        if r0 == len(rows):
            break
    for r in range(r0, len(rows)):
        if rows[r][n]:
            raise Inconsistent(f"system is inconsistent (residual {rows[r][n]})")
    x = [ZERO] * n
    for i, col in enumerate(pivots):
        row = rows[i]
        x[col] = row[n].exact_divide(row[col])
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fcol in free:
        vec = [ZERO] * n
        vec[fcol] = ONE
        scale = ONE
        # fraction-free: v_free = prod(pivots) when a division is inexact
        entries = {}
        for i, col in enumerate(pivots):
            entries[col] = (-rows[i][fcol], rows[i][col])
        try:
            for col, (num, den) in entries.items():
                vec[col] = num.exact_divide(den)
        except RingError:
            for _, den in entries.values():
                scale = scale * den
            vec = [ZERO] * n
            vec[fcol] = scale
            for col, (num, den) in entries.items():
                vec[col] = (num * scale).exact_divide(den)
        kernel.append(vec)
    # re-multiplication check
    residual = [r - s for r, s in zip(a.apply(x), b)]
    if any(residual):
        raise Inconsistent("solution failed the re-multiplication check")
    return LinearSolution(x, kernel)


def _content_reduce(row):
    """Divide a row by a common rational content to curb coefficient growth."""
    from math import gcd
    nums = []
    dens = []
    for p in row:
        for c in p.terms.values():
            nums.append(abs(c.numerator))
            dens.append(c.denominator)
    if not nums:
        return
    g = 0
    for v in nums:
        g = gcd(g, v)
    lcm = 1
    for d in dens:
        lcm = lcm * d // gcd(lcm, d)
    factor = Fraction(lcm, g)
    if factor != 1:
        row[:] = [p * factor for p in row]


def determinant(m: RingMatrix) -> Poly:
    """Laplace/Bareiss-free determinant by cofactor expansion (small n)."""
    if not m.is_square():
        raise ValueError("determinant of non-square matrix")
    rows = [list(r) for r in m.data]

    def det(rs, cols):
        if len(rs) == 1:
            return rs[0][cols[0]]
        total = ZERO
        r = rs[0]
        for k, c in enumerate(cols):
            if not r[c]:
                continue
            minor = det(rs[1:], cols[:k] + cols[k + 1:])
            term = r[c] * minor
            total = total + term if k % 2 == 0 else total - term
        return total

    return det(rows, list(range(m.cols)))


def adjugate(m: RingMatrix) -> RingMatrix:
    n = m.rows
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = RingMatrix([[m[r, c] for c in range(n) if c != j]
                                for r in range(n) if r != i]) if n > 1 else None
            cof = determinant(minor) if minor is not None else ONE
            out[j][i] = cof if (i + j) % 2 == 0 else -cof
    return RingMatrix(out)


def rank(m: RingMatrix) -> int:
    """Rank over the fraction field of the coefficient ring."""
    rows = [list(r) for r in m.data]
    rk = 0
    for col in range(m.cols):
        pr = _pick_pivot(rows, col, rk)
        if pr is None:
            continue
        rows[rk], rows[pr] = rows[pr], rows[rk]
        piv = rows[rk][col]
        for r in range(rk + 1, len(rows)):
            f = rows[r][col]
            if f:
                rows[r] = [x * piv - f * y for x, y in zip(rows[r], rows[rk])]
                _content_reduce(rows[r])
        rk += 1
        if rk == len(rows):
            break
    return rk
