"""
Right bialgebroids as monoids in R|R-coalgebroids, bialgebroid maps, and the
monoidal category of right modules.

The four R-actions on the total algebra are never stored; they are derived
from the source and target maps:  r*a*r' = a t(r) s(r')  and
r.a.r' = s(r) t(r') a.  The tensor square ``A (x)_R A`` therefore identifies
``a s(r) (x) a'`` with ``a (x) a' t(r)``.
"""

from .algkit import AlgebraMap, check_algebra, check_algebra_map, enveloping_algebra, ground_algebra
from .cgdkit import Coalgebroid, bilinear_pairs, check_coalgebroid
from .exactfield import hstack, invert, kron
from .modkit import Bimodule, IllDefinedError, Multimodule, TensorProduct, check_bimodule
from .report import Report


class BialgebroidError(ValueError):
    pass


class Bialgebroid:

    def __init__(self, total, base, s, t, delta, epsilon, name=None):
        if total.field != base.field:
            raise BialgebroidError("field mismatch")
        dA, dR = total.dim, base.dim
        for m, nm in ((s, "s"), (t, "t")):
            if m.shape != (dA, dR):
                raise BialgebroidError("%s must be %dx%d" % (nm, dA, dR))
        self.total = total
        self.base = base
        self.s = s
        self.t = t
        self.field = total.field
        self.dim = dA
        self.name = name or total.name
        A = total
        # upper: r*a*r' = a t(r) s(r');  lower: r.a.r' = s(r) t(r') a
        carrier = Multimodule(
            base, base,
            lower_left=[A.lmul(s.column(r)) for r in range(dR)],
            lower_right=[A.lmul(t.column(r)) for r in range(dR)],
            upper_left=[A.rmul(t.column(r)) for r in range(dR)],
            upper_right=[A.rmul(s.column(r)) for r in range(dR)],
            name=self.name)
        self.coring = Coalgebroid(carrier, delta, epsilon, name=self.name)

    def __repr__(self):
        return "Bialgebroid(%s over %s, dim=%d)" % (self.name, self.base.name, self.dim)

    @property
    def delta(self):
        return self.coring.delta

    @property
    def epsilon(self):
        return self.coring.epsilon

    @property
    def carrier(self):
        return self.coring.carrier

    @property
    def tensor_sq(self):
        return self.coring.tensor_sq

    def s_map(self):
        return AlgebraMap(self.base, self.total, self.s, name="s")

    def t_map(self):
        return AlgebraMap(self.base, self.total, self.t, anti=True, name="t")

    def eta(self):
        """``eta(r (x) r') = t(r) s(r')`` on ``R^e = R^op (x) R`` (index r * dim R + r')."""
        A, n = self.total, self.base.dim
        cols = [A.mult(self.t.column(r), self.s.column(q)) for r in range(n) for q in range(n)]
        return hstack(cols, self.field, A.dim)

    def delta_tensor(self, i):
        """Representative of ``Delta(e_i)`` as a ``dim x dim`` matrix."""
        return self.delta.column(i).reshape(self.dim, self.dim)

    def product_rep(self, Z1, Z2):
        """Factorwise product of two representatives in ``A (x)_k A``."""
        coef = {}
        d = self.dim
        nz2 = Z2.nonzero()
        for a, b, v in Z1.nonzero():
            for c, e, w in nz2:
                key = (a * d + c, b * d + e)
                coef[key] = coef.get(key, 0) + v * w
        return bilinear_pairs(self.total.mu, coef, self.field)

    def one_rep(self):
        u = self.total.unit
        return u @ u.T


def check_bialgebroid(A, prefix="bgd."):
    rep = Report(A.name or "bialgebroid")
    f, d, R, T = A.field, A.dim, A.base, A.total
    rep.add(prefix + "total_algebra", check_algebra(T).ok)
    rep.add(prefix + "base_algebra", check_algebra(R).ok)
    # s is multiplicative, t anti-multiplicative
    rs = check_algebra_map(A.s_map(), anti=False)
    rep.add(prefix + "s_multiplicative", rs.passed("algmap.multiplicative"), rs.items["algmap.multiplicative"]["witness"])
    rep.add(prefix + "s_unital", rs.passed("algmap.unital"))
    rt = check_algebra_map(A.t_map(), anti=True)
    rep.add(prefix + "t_antimultiplicative", rt.passed("algmap.antimultiplicative"),
            rt.items["algmap.antimultiplicative"]["witness"])
    rep.add(prefix + "t_unital", rt.passed("algmap.unital"))
    # s and t have commuting images
    bad = None
    for i in range(R.dim):
        si = T.lmul(A.s.column(i))
        for j in range(R.dim):
            tj = A.t.column(j)
            if si @ tj != T.lmul(tj) @ A.s.column(i):
                bad = [i, j]
                break
        if bad:
            break
    rep.add(prefix + "st_commute", bad is None, bad)
    Re = enveloping_algebra(R)
    re = check_algebra_map(AlgebraMap(Re, T, A.eta()))
    rep.add(prefix + "eta_algebra_map", re.ok, re.failures() or None)
    # the underlying coring
    rep.merge(check_coalgebroid(A.coring, prefix=prefix + "coring."))
    # Delta is unital and multiplicative on representatives
    T2 = A.tensor_sq
    one = T.unit
    rep.add(prefix + "delta_unital", T2.project(A.delta @ one) == T2.project_tensor(A.one_rep()))
    reps = [A.delta_tensor(i) for i in range(d)]
    bad = None
    for i in range(d):
        lhs = T2.project(A.delta @ T.left[i])
        rhs = T2.project_tensors(A.product_rep(reps[i], reps[j]) for j in range(d))
        if lhs != rhs:
            bad = [i, next(j for j in range(d) if lhs.column(j) != rhs.column(j))]
            break
    rep.add(prefix + "delta_multiplicative", bad is None, bad)
    # counit: eps(1) = 1, eps(a a') = eps(s(eps(a)) a')
    eps = A.epsilon
    rep.add(prefix + "epsilon_unital", eps @ one == R.unit)
    bad = None
    for i in range(d):
        lhs = eps @ T.left[i]
        rhs = eps @ T.lmul(A.s @ eps.column(i))
        if lhs != rhs:
            bad = [i, next(c for (_, c, _) in (lhs - rhs).nonzero())]
            break
    rep.add(prefix + "epsilon_multiplicative", bad is None, bad)
    return rep


def sweedler_bialgebroid(R):
    """``E(R)`` on ``R^op (x) R``: ``s(r) = 1 (x) r``, ``t(r) = r (x) 1``."""
    from .cgdkit import sweedler_unit
    from .exactfield import kron
    f, n = R.field, R.dim
    total = enveloping_algebra(R, name="E(%s)" % R.name)
    I, u = f.eye(n), R.unit
    E = sweedler_unit(R)
    return Bialgebroid(total, R, kron(u, I), kron(I, u), E.delta, E.epsilon, name="E(%s)" % R.name)


class BialgebroidMap:
    """An algebra map ``f: A -> B`` of total algebras; ``f0 = eps_B f s_A`` unless given."""

    def __init__(self, source, target, matrix, f0=None, name=None):
        if matrix.shape != (target.dim, source.dim):
            raise BialgebroidError("map has shape %s, expected %s" % (matrix.shape, (target.dim, source.dim)))
        if source.field != target.field:
            raise BialgebroidError("field mismatch")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.f0 = target.epsilon @ matrix @ source.s if f0 is None else f0
        self.name = name

    def is_invertible(self):
        return self.matrix.is_square() and invert(self.matrix) is not None


def check_bialgebroid_map(F, prefix="bgdmap."):
    A, B, f, f0 = F.source, F.target, F.matrix, F.f0
    rep = Report(F.name or "bialgebroid map")
    ra = check_algebra_map(AlgebraMap(A.total, B.total, f))
    rep.add(prefix + "algebra_map", ra.ok, ra.failures() or None)
    r0 = check_algebra_map(AlgebraMap(A.base, B.base, f0))
    rep.add(prefix + "base_algebra_map", r0.ok, r0.failures() or None)
    rep.add(prefix + "source", f @ A.s == B.s @ f0)
    rep.add(prefix + "target", f @ A.t == B.t @ f0)
    T = B.tensor_sq
    from .cgdkit import pair_apply
    lhs = T.project(pair_apply(f, f, A.delta, A.dim))
    rhs = T.project(B.delta @ f)
    bad = [j for j in range(A.dim) if lhs.column(j) != rhs.column(j)]
    rep.add(prefix + "comultiplicative", not bad, bad[:1] or None)
    rep.add(prefix + "counital", B.epsilon @ f == f0 @ A.epsilon)
    rep.meta["isomorphism"] = F.is_invertible()
    return rep


def identity_bialgebroid_map(A):
    return BialgebroidMap(A, A, A.field.eye(A.dim), name="id")


def eta_map(A):
    """``eta: E(R) -> A``, ``r1 (x) r2 -> t(r1) s(r2)``."""
    return BialgebroidMap(sweedler_bialgebroid(A.base), A, A.eta(), name="eta")


# right modules


def trivial_module(A):
    """``R`` as a right A-module: ``r <| a = eps(s(r) a)``."""
    T, eps, s = A.total, A.epsilon, A.s
    acts = [eps @ T.right[a] @ s for a in range(A.dim)]
    return Bimodule(ground_algebra(A.field), T, [A.field.eye(A.base.dim)], acts, name="triv(%s)" % A.name)


def regular_module(A):
    T = A.total
    return Bimodule(ground_algebra(A.field), T, [A.field.eye(T.dim)], T.right, name=A.name)


def check_right_module(M, prefix="mod."):
    rep = check_bimodule(M, prefix=prefix)
    return rep


def module_tensor(M, N, A, check=True):
    """``M (x)_R N`` in the monoidal category of right A-modules.

    Balanced by ``m <| s(r) (x) n = m (x) n <| t(r)``; ``(m (x) n) <| a = m <| a1 (x) n <| a2``.
    Returns ``(TensorProduct, right module)``.
    """
    f = A.field
    R = A.base
    mr = [M.ract(A.s.column(r)) for r in range(R.dim)]
    nl = [N.ract(A.t.column(r)) for r in range(R.dim)]
    T = TensorProduct(f, mr, nl, M.dim, N.dim, name="%s(x)%s" % (M.name, N.name))
    acts = []
    W = T.relations() if check else None
    small = M.dim * N.dim <= 4096
    for a in range(A.dim):
        terms = A.delta_tensor(a).nonzero()
        if small:
            # ambient operator sum v (R^M_x (x) R^N_y), pushed through the quotient
            F = None
            for x, y, v in terms:
                u = kron(M.right_act[x], N.right_act[y]).scale(v)
                F = u if F is None else F + u
            if F is None:
                F = f.zeros(M.dim * N.dim, M.dim * N.dim)
            op = T.project(F @ T.section)
            if check and W.cols and not T.project(F @ W).is_zero():
                raise IllDefinedError("diagonal action of basis element %d is not well defined" % a)
            acts.append(op)
            continue
        cols = []
        for m, n in T.basis_pairs:
            acc = None
            for x, y, v in terms:
                u = T.pure(M.right_act[x].column(m), N.right_act[y].column(n)).scale(v)
                acc = u if acc is None else acc + u
            cols.append(acc if acc is not None else f.zeros(T.dim, 1))
        op = hstack(cols, f, T.dim)
        if check and W.cols:
            for c in range(W.cols):
                w = W.column(c).reshape(M.dim, N.dim)
                img = None
                for x, y, v in terms:
                    u = T.project_tensor(M.right_act[x] @ w @ N.right_act[y].T).scale(v)
                    img = u if img is None else img + u
                if img is not None and not img.is_zero():
                    raise IllDefinedError("diagonal action of basis element %d is not well defined" % a)
        acts.append(op)
    return T, Bimodule(ground_algebra(f), A.total, [f.eye(T.dim)], acts, name=T.name)


def module_unitors(M, A):
    """Matrices of ``M (x)_R R -> M`` and ``R (x)_R M -> M`` (``m (x) r -> m <| s(r)``, ``r (x) m -> m <| t(r)``)."""
    Rmod = trivial_module(A)
    f = A.field
    T1, MR = module_tensor(M, Rmod, A)
    T2, RM = module_tensor(Rmod, M, A)
    right = hstack([M.ract(A.s.column(r)).column(m) for m, r in T1.basis_pairs], f, M.dim)
    left = hstack([M.ract(A.t.column(r)).column(m) for r, m in T2.basis_pairs], f, M.dim)
    return (T1, MR, right), (T2, RM, left)


def module_map_ok(F, M, N):
    """``F`` intertwines the right actions of M and N."""
    return all(F @ x == y @ F for x, y in zip(M.right_act, N.right_act))


__all__ = [
    "Bialgebroid", "BialgebroidError", "BialgebroidMap", "check_bialgebroid", "check_bialgebroid_map",
    "check_right_module", "eta_map", "identity_bialgebroid_map", "module_map_ok", "module_tensor",
    "module_unitors", "regular_module", "sweedler_bialgebroid", "trivial_module",
]
