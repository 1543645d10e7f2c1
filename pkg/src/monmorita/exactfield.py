"""
Exact scalars and dense matrices over the rationals or a prime field.

Matrices wrap python-flint's ``fmpq_mat`` / ``nmod_mat``.  Everything
above this module only sees :class:`Field`, :class:`Matrix` and the four
linear-algebra primitives ``rref``, ``kernel_basis``, ``solve`` and
``invert``.
"""

from fractions import Fraction

import flint


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class FieldError(ValueError):
    pass


class Field:
    """The rationals (``p is None``) or GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not (2 <= p < 2**31) or not _is_prime(p):
                raise FieldError("modulus must be a prime below 2^31: %r" % (p,))
        self.p = p

    @classmethod
    def parse(cls, text):
        """Parse ``"Q"`` or ``"GF:p"``."""
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls()
        if text.upper().startswith("GF:"):
            return cls(int(text[3:]))
        raise FieldError("unknown field %r" % text)

    @property
    def kind(self):
        return "Rationals" if self.p is None else "PrimeField"

    @property
    def name(self):
        return "Q" if self.p is None else "GF:%d" % self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(%s)" % self.name

    # scalars

    def __call__(self, x):
        p = self.p
        if p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, str):
                x = Fraction(x.strip())
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, flint.nmod):
                raise FieldError("cannot coerce a residue into Q")
            return flint.fmpq(int(x))
        if isinstance(x, flint.nmod):
            if x.modulus() != p:
                raise FieldError("residue modulus mismatch")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % p == 0:
                raise FieldError("denominator divisible by %d" % p)
            return flint.nmod(num, p) / flint.nmod(den, p)
        return flint.nmod(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def format(self, x):
        """Canonical string: ``a/b`` or ``a`` for Q, the residue for GF(p)."""
        return str(self(x))

    def characteristic(self):
        return 0 if self.p is None else self.p

    # matrices

    def _raw(self, rows, cols, entries=None):
        if self.p is None:
            if entries is None:
                return flint.fmpq_mat(rows, cols)
            return flint.fmpq_mat(rows, cols, entries)
        if entries is None:
            return flint.nmod_mat(rows, cols, self.p)
        return flint.nmod_mat(rows, cols, entries, self.p)

    def _coerce_entries(self, entries):
        kinds = set(map(type, entries))
        if kinds <= ({flint.fmpq, int} if self.p is None else {flint.nmod}):
            return entries      # flint itself rejects residues of another modulus
        out = []
        for e in entries:
            if isinstance(e, (int, flint.fmpq)) and self.p is None:
                out.append(e)
            elif isinstance(e, int):
                out.append(e % self.p)
            else:
                e = self(e)
                out.append(int(e) if self.p is not None else e)
        return out

    def zeros(self, rows, cols):
        return Matrix(self, self._raw(rows, cols))

    def eye(self, n):
        m = self._raw(n, n)
        for i in range(n):
            m[i, i] = 1
        return Matrix(self, m)

    def from_entries(self, rows, cols, entries):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ValueError("expected %d entries, got %d" % (rows * cols, len(entries)))
        if rows == 0 or cols == 0:
            return self.zeros(rows, cols)
        return Matrix(self, self._raw(rows, cols, self._coerce_entries(entries)))

    def matrix(self, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return self.from_entries(len(rows), ncols, [x for r in rows for x in r])

    def column(self, values):
        values = list(values)
        return self.from_entries(len(values), 1, values)

    def unit_vector(self, n, i):
        m = self._raw(n, 1)
        m[i, 0] = 1
        return Matrix(self, m)

    def from_sparse(self, rows, cols, items):
        """Build from ``{(i, j): value}``; zero elsewhere."""
        m = self._raw(rows, cols)
        for (i, j), v in items.items():
            m[i, j] = v if self.p is None else int(self(v))
        return Matrix(self, m)


QQ = Field()


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "_m")

    def __init__(self, field, raw):
        self.field = field
        self._m = raw

    @property
    def rows(self):
        return self._m.nrows()

    @property
    def cols(self):
        return self._m.ncols()

    @property
    def shape(self):
        return (self._m.nrows(), self._m.ncols())

    def __getitem__(self, ij):
        return self._m[ij]

    def entries(self):
        if self.rows == 0 or self.cols == 0:
            return []
        return self._m.entries()

    def tolist(self):
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def __repr__(self):
        return "Matrix(%s, %dx%d)" % (self.field.name, self.rows, self.cols)

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected Matrix, got %r" % type(other))
        if other.field != self.field:
            raise FieldError("field mismatch: %s vs %s" % (self.field.name, other.field.name))

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return self.field.zeros(self.rows, other.cols)
        return Matrix(self.field, self._m * other._m)

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s + %s" % (self.shape, other.shape))
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self._m + other._m)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s - %s" % (self.shape, other.shape))
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self._m - other._m)

    def __neg__(self):
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, -self._m)

    def scale(self, c):
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self._m * self.field(c))

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.rows == 0 or self.cols == 0:
            return True
        return self._m == other._m

    __hash__ = None

    @property
    def T(self):
        if self.rows == 0 or self.cols == 0:
            return self.field.zeros(self.cols, self.rows)
        return Matrix(self.field, self._m.transpose())

    def is_zero(self):
        if self.rows == 0 or self.cols == 0:
            return True
        return self._m == self.field._raw(self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def column(self, j):
        return self.submatrix(range(self.rows), [j])

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def row(self, i):
        return self.submatrix([i], range(self.cols))

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        m = self._m
        if not rows or not cols:
            return self.field.zeros(len(rows), len(cols))
        if len(cols) == self.cols and cols == list(range(self.cols)):
            e = self.entries()
            c = self.cols
            flat = [x for i in rows for x in e[i * c:(i + 1) * c]]
        else:
            flat = [m[i, j] for i in rows for j in cols]
        return Matrix(self.field, self.field._raw(len(rows), len(cols), flat))

    def reshape(self, rows, cols):
        """Row-major reshape."""
        if rows * cols != self.rows * self.cols:
            raise ValueError("cannot reshape %s to %s" % (self.shape, (rows, cols)))
        if rows == 0 or cols == 0:
            return self.field.zeros(rows, cols)
        return Matrix(self.field, self.field._raw(rows, cols, self.entries()))

    def vec(self):
        """Row-major vectorisation as a column."""
        return self.reshape(self.rows * self.cols, 1)

    def nonzero(self):
        """``[(i, j, value)]`` for nonzero entries, row-major."""
        e = self.entries()
        c = self.cols
        return [(k // c, k % c, v) for k, v in enumerate(e) if v != 0]

    def rank(self):
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._m.rank()

    def trace(self):
        t = self.field.zero
        for i in range(min(self.rows, self.cols)):
            t += self._m[i, i]
        return t


def hstack(mats, field=None, rows=None):
    mats = list(mats)
    if not mats:
        return field.zeros(rows or 0, 0)
    f = mats[0].field
    r = mats[0].rows
    for m in mats:
        if m.rows != r:
            raise ValueError("hstack row mismatch")
    cols = sum(m.cols for m in mats)
    if r == 0 or cols == 0:
        return f.zeros(r, cols)
    rows_ = [[] for _ in range(r)]
    for m in mats:
        if m.cols == 0:
            continue
        for i, row in enumerate(m.tolist()):
            rows_[i].extend(row)
    return Matrix(f, f._raw(r, cols, [x for row in rows_ for x in row]))


def vstack(mats, field=None, cols=None):
    mats = list(mats)
    if not mats:
        return field.zeros(0, cols or 0)
    f = mats[0].field
    c = mats[0].cols
    for m in mats:
        if m.cols != c:
            raise ValueError("vstack column mismatch")
    rows = sum(m.rows for m in mats)
    if rows == 0 or c == 0:
        return f.zeros(rows, c)
    flat = []
    for m in mats:
        flat.extend(m.entries())
    return Matrix(f, f._raw(rows, c, flat))


def kron(a, b):
    """Kronecker product, row index ``(i, k)`` and column ``(j, l)`` row-major."""
    f = a.field
    ra, ca, rb, cb = a.rows, a.cols, b.rows, b.cols
    if ra * rb == 0 or ca * cb == 0:
        return f.zeros(ra * rb, ca * cb)
    out = f._raw(ra * rb, ca * cb)
    brows = b.nonzero()
    for i, j, x in a.nonzero():
        for k, l, y in brows:
            out[i * rb + k, j * cb + l] = x * y
    return Matrix(f, out)


def block_diag(mats):
    mats = list(mats)
    f = mats[0].field
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = f._raw(r, c)
    i0 = j0 = 0
    for m in mats:
        for i, j, v in m.nonzero():
            out[i0 + i, j0 + j] = v
        i0 += m.rows
        j0 += m.cols
    return Matrix(f, out)


def rref(M):
    """Reduced row echelon form: ``(R, pivots, rank)``."""
    f = M.field
    if M.rows == 0 or M.cols == 0:
        return M, [], 0
    raw, rank = M._m.rref()
    R = Matrix(f, raw)
    pivots = []
    e = R.entries()
    c = M.cols
    j = 0
    for i in range(rank):
        row = e[i * c:(i + 1) * c]
        while row[j] == 0:
            j += 1
        pivots.append(j)
        j += 1
    return R, pivots, rank


def rank(M):
    return M.rank()


def kernel_basis(M):
    """Columns spanning ``ker M`` (one per free column of the rref)."""
    f = M.field
    n = M.cols
    R, pivots, r = rref(M)
    free = [j for j in range(n) if j not in set(pivots)]
    if not free:
        return f.zeros(n, 0)
    K = f._raw(n, len(free))
    e = R.entries() if R.rows and R.cols else []
    for k, j in enumerate(free):
        K[j, k] = 1
        for i, p in enumerate(pivots):
            v = e[i * n + j]
            if v != 0:
                K[p, k] = -v
    return Matrix(f, K)


def column_space(M):
    """Basis (as columns) of the column span of ``M``: the pivot columns."""
    _, pivots, _ = rref(M)
    return M.submatrix(range(M.rows), pivots)


def solve(A, b):
    """Some ``X`` with ``A @ X == b``, or ``None`` if there is none."""
    if A.field != b.field:
        raise FieldError("field mismatch")
    if A.rows != b.rows:
        raise ValueError("row count mismatch: %d vs %d" % (A.rows, b.rows))
    f = A.field
    n, k = A.cols, b.cols
    if k == 0:
        return f.zeros(n, 0)
    if A.rows == 0:
        return f.zeros(n, k)
    R, pivots, r = rref(hstack([A, b]))
    if pivots and pivots[-1] >= n:
        return None
    X = f._raw(n, k) if n else None
    if n == 0:
        return f.zeros(0, k) if b.is_zero() else None
    e = R.entries()
    w = n + k
    for i, p in enumerate(pivots):
        for j in range(k):
            v = e[i * w + n + j]
            if v != 0:
                X[p, j] = v
    return Matrix(f, X)


def invert(M):
    """``M^-1`` or ``None`` when singular."""
    if not M.is_square():
        raise ValueError("cannot invert a %dx%d matrix" % M.shape)
    if M.rows == 0:
        return M
    try:
        return Matrix(M.field, M._m.inv())
    except ZeroDivisionError:
        return None


def in_span(M, v):
    """Whether every column of ``v`` lies in the column span of ``M``."""
    if M.cols == 0:
        return v.is_zero()
    return solve(M, v) is not None
