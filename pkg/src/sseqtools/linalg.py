"""Exact linear algebra over F_p and Q, and Smith normal form over Z.

Matrices are lists of rows; a matrix with zero rows or zero columns is
allowed everywhere.  F_p entries are ints reduced mod p, rational entries
are fractions.Fraction, integer matrices are plain ints.  Everything is
exact; nothing here uses floating point.
"""

from fractions import Fraction

from .errors import InputError


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """Arithmetic in F_p."""

    def __init__(self, p):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def of(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class RationalField:
    """Arithmetic in Q via fractions.Fraction."""

    zero = Fraction(0)
    one = Fraction(1)

    def of(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def field_from_name(name):
    """"Q" -> rationals, "F5" -> F_5."""
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F"):
        return PrimeField(int(name[1:]))
    raise InputError(f"unknown field {name!r}")


def zeros(nrows, ncols, field=None):
    z = field.zero if field is not None else 0
    return [[z] * ncols for _ in range(nrows)]


def identity(n, field=None):
    one = field.one if field is not None else 1
    m = zeros(n, n, field)
    for i in range(n):
        m[i][i] = one
    return m


def shape(mat):
    return (len(mat), len(mat[0]) if mat else 0)


def transpose(mat, ncols=None):
    """Transpose; pass ncols so a 0-row matrix keeps its column count."""
    if not mat:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*mat)]


def mat_mul(field, a, b):
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(a)} * {shape(b)}")
    out = zeros(n, m, field)
    for i in range(n):
        ai = a[i]
        row = out[i]
        for t in range(k):
            c = ai[t]
            if c == field.zero:
                continue
            bt = b[t]
            for j in range(m):
                row[j] = field.add(row[j], field.mul(c, bt[j]))
    return out


def mat_vec(field, a, v):
    return [c[0] for c in mat_mul(field, a, [[x] for x in v])]


def is_zero_matrix(field, a):
    return all(x == field.zero for row in a for x in row)


def rref(field, mat):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    rows = [list(r) for r in mat]
    nrows, ncols = shape(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != field.zero:
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def rank(field, mat):
    return len(rref(field, mat)[1])


def nullspace(field, mat, ncols=None):
    """Basis for {x : mat @ x = 0}, one vector per free column.

    Pass ncols explicitly when mat may have zero rows.
    """
    nrows, ncols_ = shape(mat)
    ncols = ncols_ if mat else (ncols or 0)
    rows, pivots = rref(field, mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(rows[r][fc])
        basis.append(v)
    return basis


def solve(field, mat, b):
    """One solution x of mat @ x = b, or None if inconsistent."""
    nrows, ncols = shape(mat)
    if len(b) != nrows:
        raise ValueError("rhs length mismatch")
    aug = [list(row) + [b[i]] for i, row in enumerate(mat)]
    rows, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def row_space_contains(field, rows, v):
    if not rows:
        return all(x == field.zero for x in v)
    return solve(field, transpose(rows), v) is not None


def quotient_pivots(field, span_rows, ambient_dim):
    """Pivot coordinates of a row space inside F^ambient_dim.

    The complement coordinates index a basis of the quotient space.
    """
    if not span_rows:
        return []
    _, pivots = rref(field, span_rows)
    return pivots


# ---------------------------------------------------------------------------
# Integer matrices: Smith normal form and friends.
# ---------------------------------------------------------------------------


def smith_normal_form(mat):
    """Smith normal form over Z.

    Returns (d, u, v) with u @ mat @ v == d, u and v unimodular, and d
    diagonal with d[i][i] dividing d[i+1][i+1].
    """
    a = [list(r) for r in mat]
    n, m = shape(a)
    u = identity(n)
    v = identity(m)

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(n):
            a[r][i] -= q * a[r][j]
        for r in range(m):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(m):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(n, m):
        # find a nonzero entry of least magnitude in the remaining block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, n):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                row_op(i, t, q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, m):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                col_op(j, t, q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # make the pivot divide the rest of the block
        piv = a[t][t]
        offender = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # adds the offending row to the pivot row
            continue
        if piv < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def snf_divisors(mat):
    d, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(shape(d))):
        if d[i][i] != 0:
            out.append(abs(d[i][i]))
    return out


def integer_rank(mat):
    return len(snf_divisors(mat))


def solve_integer(mat, b):
    """One integer solution x of mat @ x = b, or None."""
    d, u, v = smith_normal_form(mat)
    n, m = shape(mat)
    ub = mat_vec_int(u, b)
    y = [0] * m
    for i in range(min(n, m)):
        di = d[i][i]
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
    for i in range(min(n, m), n):
        if ub[i] != 0:
            return None
    return mat_vec_int(v, y)


def mat_vec_int(a, x):
    return [sum(c * xi for c, xi in zip(row, x)) for row in a]


def mat_mul_int(a, b):
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError("shape mismatch")
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]
