"""
Finite-dimensional associative unital algebras given by structure constants.

An algebra of dimension n is stored through its left regular
representation: ``left[i]`` is the n x n matrix of ``x -> e_i x``, so that
column j of ``left[i]`` holds the coordinates of ``e_i e_j``.
"""

from .exactfield import hstack, invert, kron
from .report import Report


class AlgebraError(ValueError):
    pass


class FiniteAlgebra:

    def __init__(self, field, left, unit, name=None):
        left = list(left)
        n = len(left)
        if unit.shape != (n, 1):
            raise AlgebraError("unit has shape %s, expected (%d, 1)" % (unit.shape, n))
        for L in left:
            if L.shape != (n, n) or L.field != field:
                raise AlgebraError("structure constants do not match dimension %d" % n)
        self.field = field
        self.dim = n
        self.left = left
        self.unit = unit
        self.name = name
        self._right = None
        self._mu = None

    @classmethod
    def from_constants(cls, field, mul, unit, name=None):
        """``mul[i][j][k]`` is the coefficient of ``e_k`` in ``e_i e_j``."""
        n = len(mul)
        for row in mul:
            if len(row) != n or any(len(v) != n for v in row):
                raise AlgebraError("structure constants are not %d x %d x %d" % (n, n, n))
        if len(unit) != n:
            raise AlgebraError("unit has length %d, expected %d" % (len(unit), n))
        left = [field.from_entries(n, n, [mul[i][j][k] for k in range(n) for j in range(n)])
                for i in range(n)]
        return cls(field, left, field.column(unit), name)

    def constants(self):
        n = self.dim
        cols = [L.tolist() for L in self.left]
        return [[[cols[i][k][j] for k in range(n)] for j in range(n)] for i in range(n)]

    def __repr__(self):
        return "FiniteAlgebra(%s, dim=%d, %s)" % (self.name, self.dim, self.field.name)

    @property
    def right(self):
        """``right[j]`` is the matrix of ``x -> x e_j``."""
        if self._right is None:
            n = self.dim
            cols = [L.entries() for L in self.left]
            self._right = [self.field.from_entries(n, n, [cols[i][k * n + j] for k in range(n) for i in range(n)])
                           for j in range(n)]
        return self._right

    @property
    def mu(self):
        """Multiplication ``A (x) A -> A`` as a ``dim x dim^2`` matrix."""
        if self._mu is None:
            self._mu = hstack(self.left, self.field, self.dim)
        return self._mu

    def basis(self, i):
        return self.field.unit_vector(self.dim, i)

    def vector(self, coords):
        return self.field.column(coords)

    def lmul(self, x):
        """Matrix of left multiplication by the element ``x`` (a column)."""
        out = self.field.zeros(self.dim, self.dim)
        for i, _, c in x.nonzero():
            out = out + self.left[i].scale(c)
        return out

    def rmul(self, x):
        out = self.field.zeros(self.dim, self.dim)
        for i, _, c in x.nonzero():
            out = out + self.right[i].scale(c)
        return out

    def mult(self, x, y):
        return self.lmul(x) @ y

    def product(self, i, j):
        return self.left[i].column(j)

    def is_commutative(self):
        return all(self.left[i] == self.right[i] for i in range(self.dim))

    def centre(self):
        from .exactfield import kernel_basis, vstack
        n = self.dim
        # x central iff e_i x = x e_i for all i
        blocks = [self.left[i] - self.right[i] for i in range(n)]
        return kernel_basis(vstack(blocks, self.field, n))

    def same_structure(self, other):
        return (self.field == other.field and self.dim == other.dim
                and self.unit == other.unit and all(a == b for a, b in zip(self.left, other.left)))


class AlgebraMap:
    """A linear map between algebras given by its ``target.dim x source.dim`` matrix."""

    def __init__(self, source, target, matrix, anti=False, name=None):
        if matrix.shape != (target.dim, source.dim):
            raise AlgebraError("map matrix has shape %s, expected %s" % (matrix.shape, (target.dim, source.dim)))
        if source.field != target.field:
            raise AlgebraError("field mismatch")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.anti = anti
        self.name = name

    def __call__(self, x):
        return self.matrix @ x

    def compose(self, other):
        """``self o other``."""
        return AlgebraMap(other.source, self.target, self.matrix @ other.matrix, anti=self.anti != other.anti)

    def is_invertible(self):
        return self.matrix.is_square() and invert(self.matrix) is not None


def check_algebra(A):
    rep = Report(A.name or "algebra")
    n = A.dim
    bad = None
    for i in range(n):
        for j in range(n):
            # (e_i e_j) x == e_i (e_j x) for all basis x
            lhs = A.lmul(A.product(i, j))
            rhs = A.left[i] @ A.left[j]
            if lhs != rhs:
                diff = lhs - rhs
                l = next(c for (_, c, _) in diff.nonzero())
                bad = [i, j, l]
                break
        if bad:
            break
    rep.add("alg.associative", bad is None, bad)
    one = A.field.eye(n)
    lu = A.lmul(A.unit) == one
    ru = A.rmul(A.unit) == one
    rep.add("alg.unit_left", lu)
    rep.add("alg.unit_right", ru)
    return rep


def check_algebra_map(f, anti=None):
    """Multiplicativity (or anti-multiplicativity) on basis pairs and unit preservation."""
    anti = f.anti if anti is None else anti
    A, B = f.source, f.target
    rep = Report(f.name or "algebra map")
    M = f.matrix
    bad = None
    for i in range(A.dim):
        fi = M.column(i)
        # f(e_i e_j) vs f(e_i) f(e_j) for all j at once
        lhs = M @ A.left[i]
        rhs = B.rmul(fi) @ M if anti else B.lmul(fi) @ M
        if lhs != rhs:
            j = next(c for (_, c, _) in (lhs - rhs).nonzero())
            bad = [i, j]
            break
    rep.add("algmap.antimultiplicative" if anti else "algmap.multiplicative", bad is None, bad)
    rep.add("algmap.unital", M @ A.unit == B.unit)
    return rep


def _check_n(n):
    if n < 1:
        raise AlgebraError("n must be >= 1")


def ground_algebra(field):
    return FiniteAlgebra(field, [field.eye(1)], field.column([1]), name="k")


def matrix_algebra(field, n, name=None):
    """Mat_n(k) with basis of matrix units ``e_ij`` at index ``i*n + j``."""
    _check_n(n)
    d = n * n
    left = []
    for i in range(n):
        for j in range(n):
            # e_ij e_kl = delta_jk e_il
            left.append(field.from_sparse(d, d, {(i * n + l, j * n + l): 1 for l in range(n)}))
    unit = field.column([1 if i % (n + 1) == 0 else 0 for i in range(d)])
    return FiniteAlgebra(field, left, unit, name or "Mat%d" % n)


def diagonal_algebra(field, n, name=None):
    _check_n(n)
    left = [field.from_sparse(n, n, {(i, i): 1}) for i in range(n)]
    return FiniteAlgebra(field, left, field.column([1] * n), name or "Diag%d" % n)


def check_group_table(table):
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        return "table is not square"
    if any(not (0 <= x < n) for r in table for x in r):
        return "table is not closed"
    ident = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
    if not ident:
        return "no identity element"
    e = ident[0]
    for g in range(n):
        if not any(table[g][h] == e and table[h][g] == e for h in range(n)):
            return "element %d has no inverse" % g
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return "not associative at %r" % ((a, b, c),)
    return None


def group_identity(table):
    n = len(table)
    return next(e for e in range(n) if all(table[e][g] == g for g in range(n)))


def group_algebra(field, table, name=None):
    """k[G] with ``e_g e_h = e_{gh}`` for a Cayley table ``table[g][h] = gh``."""
    problem = check_group_table(table)
    if problem:
        raise AlgebraError("not a group: " + problem)
    n = len(table)
    left = [field.from_sparse(n, n, {(table[g][h], h): 1 for h in range(n)}) for g in range(n)]
    e = group_identity(table)
    return FiniteAlgebra(field, left, field.unit_vector(n, e), name or "k[G%d]" % n)


def cyclic_group_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def product_group_table(t1, t2):
    n1, n2 = len(t1), len(t2)
    return [[t1[a // n2][b // n2] * n2 + t2[a % n2][b % n2] for b in range(n1 * n2)] for a in range(n1 * n2)]


def truncated_polynomial_algebra(field, n, name=None):
    """k[x]/(x^n) with basis 1, x, ..., x^{n-1}."""
    _check_n(n)
    left = [field.from_sparse(n, n, {(i + j, j): 1 for j in range(n) if i + j < n}) for i in range(n)]
    return FiniteAlgebra(field, left, field.unit_vector(n, 0), name or "k[x]/x^%d" % n)


def tensor_algebras(A, B, name=None):
    """A (x) B with basis index ``a * dim B + b``."""
    if A.field != B.field:
        raise AlgebraError("field mismatch")
    left = [kron(La, Lb) for La in A.left for Lb in B.left]
    unit = kron(A.unit, B.unit)
    return FiniteAlgebra(A.field, left, unit, name or "(%s*%s)" % (A.name, B.name))


def opposite_algebra(A, name=None):
    return FiniteAlgebra(A.field, list(A.right), A.unit, name or "%s^op" % A.name)


def enveloping_algebra(R, name=None):
    """R^e = R^op (x) R, the total algebra of the Sweedler bialgebroid."""
    return tensor_algebras(opposite_algebra(R), R, name or "%s^e" % R.name)


def identity_map(A):
    return AlgebraMap(A, A, A.field.eye(A.dim), name="id")


def transpose_map(field, n):
    """Transpose on Mat_n as a linear map (an anti-automorphism)."""
    d = n * n
    M = field.from_sparse(d, d, {(j * n + i, i * n + j): 1 for i in range(n) for j in range(n)})
    A = matrix_algebra(field, n)
    return AlgebraMap(A, A, M, anti=True, name="transpose")


def algebra_iso_by_reindex(A, B, perm):
    """Check whether basis permutation ``perm`` (A index -> B index) identifies constants."""
    if A.dim != B.dim:
        return False
    field = A.field
    P = field.from_sparse(B.dim, A.dim, {(perm[i], i): 1 for i in range(A.dim)})
    f = AlgebraMap(A, B, P)
    return check_algebra_map(f).ok and invert(P) is not None


def dihedral_group_table(m):
    """Dihedral group of order 2m; ``r^a s^b`` at index ``b*m + a``."""
    def mul(x, y):
        (b, a), (d, c) = divmod(x, m), divmod(y, m)
        return ((b + d) % 2) * m + (a + (c if b == 0 else -c)) % m
    return [[mul(x, y) for y in range(2 * m)] for x in range(2 * m)]


build_matrix_algebra = matrix_algebra
build_group_algebra = group_algebra
build_diagonal_algebra = diagonal_algebra
