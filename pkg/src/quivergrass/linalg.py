"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``. Everything here is small
scale: the matrices that show up have at most a few hundred columns.
"""
from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def mat_mul(a: Matrix, b: Matrix, inner: int = None) -> Matrix:
    """Product of an r x k and a k x c matrix.

    ``inner`` must be given when ``a`` has no rows and ``b`` has none either,
    otherwise the column count of the result cannot be recovered; callers
    that track shapes pass it through ``cols``.
    """
    if not a:
        return []
    k = len(a[0])
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * cols
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(cols):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def transpose(a: Matrix, cols: int = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; pivots are the leftmost nonzero entries.

    Returns the nonzero rows of the echelon form and the pivot columns.
    """
    m = [list(map(as_fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        if inv != 1:
            m[r] = [x * inv for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row = m[i]
                m[i] = [x - f * y if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(a: Matrix, ncols: int) -> Matrix:
    """Basis of {x : a x = 0}, one vector per free column."""
    red, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(red, pivots):
            if row[free]:
                v[p] = -row[free]
        basis.append(v)
    return basis


def sparse_nullspace(rows, ncols: int) -> Matrix:
    """Nullspace of a system given as sparse rows {column: coefficient}."""
    echelon = {}
    for row in rows:
        w = {c: as_fraction(x) for c, x in row.items() if x}
        while w:
            p = min(w)
            prow = echelon.get(p)
            if prow is None:
                inv = 1 / w[p]
                echelon[p] = {c: x * inv for c, x in w.items()}
                break
            f = w[p]
            for c, y in prow.items():
                x = w.get(c, 0) - f * y
                if x:
                    w[c] = x
                else:
                    w.pop(c, None)
    # back substitution to reduced form, highest pivot first
    order = sorted(echelon, reverse=True)
    for i, p in enumerate(order):
        row = echelon[p]
        for q in order[:i]:
            f = row.get(q)
            if f:
                for c, y in echelon[q].items():
                    x = row.get(c, 0) - f * y
                    if x:
                        row[c] = x
                    else:
                        row.pop(c, None)
    basis = []
    for free in range(ncols):
        if free in echelon:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for p, row in echelon.items():
            x = row.get(free)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


class RowSpace:
    """Incrementally maintained row space in reduced echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: Matrix = []
        self.pivots: List[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Sequence[Fraction]) -> List[Fraction]:
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            f = w[p]
            if f:
                w = [x - f * y if y else x for x, y in zip(w, row)]
        return w

    def add(self, v: Sequence[Fraction]) -> bool:
        """Insert ``v``; returns False if it was already in the span."""
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for i, row in enumerate(self.rows):
            f = row[p]
            if f:
                self.rows[i] = [x - f * y if y else x for x, y in zip(row, w)]
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, w)
        self.pivots.insert(k, p)
        return True

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def copy(self) -> "RowSpace":
        # rows are replaced on update, never mutated, so a shallow copy suffices
        out = RowSpace(self.ncols)
        out.rows = list(self.rows)
        out.pivots = list(self.pivots)
        return out

    def basis(self) -> Matrix:
        return [list(r) for r in self.rows]


def same_row_space(a: Matrix, b: Matrix, ncols: int) -> bool:
    ra, _ = rref(a, ncols)
    rb, _ = rref(b, ncols)
    return ra == rb


def solve_in_span(basis_rows: Matrix, v: Sequence[Fraction], ncols: int):
    """Coefficients x with sum x_i basis_rows[i] = v, or None."""
    k = len(basis_rows)
    if k == 0:
        return [] if not any(v) else None
    # columns of the system are the basis rows
    aug = [[basis_rows[i][j] for i in range(k)] + [as_fraction(v[j])] for j in range(ncols)]
    red, piv = rref(aug, k + 1)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(red, piv):
        x[p] = row[k]
    return x


def inverse(a: Matrix):
    """Inverse of a square matrix, or None when singular."""
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in red[:n]]
