"""
Coalgebroids: S-corings inside R(x)S-bimodules, their maps, the horizontal
composition ``P . Q = P (x)_{S^e} Q`` and the Sweedler unit ``E(R)``.

Upper dots (``s * c * s'``) are the S-actions, lower dots (``r . c . r'``)
the R-actions.  ``delta`` is kept as an ambient representative
``C -> C (x)_k C`` (a ``dim^2 x dim`` matrix); every axiom is checked after
projecting to ``C (x)_S C``.
"""

from .exactfield import hstack, invert, kron
from .modkit import (
    IllDefinedError, ModuleError, Multimodule, TensorProduct, check_multimodule, combination,
)
from .report import Report


class CoalgebroidError(ValueError):
    pass


def pair_apply(X, Y, D, dim_in):
    """``(X (x) Y) @ D`` without forming the Kronecker product.

    Columns of D are ambient tensors in ``k^dim_in (x) k^dim_in`` (or
    ``k^a (x) k^b`` when ``dim_in`` is a pair).
    """
    a, b = dim_in if isinstance(dim_in, tuple) else (dim_in, dim_in)
    f = D.field
    Yt = Y.T
    cols = [(X @ D.column(c).reshape(a, b) @ Yt).vec() for c in range(D.cols)]
    return hstack(cols, f, X.rows * Y.rows)


class Coalgebroid:
    """An R|S-coalgebroid on a multimodule with lower base R and upper base S."""

    def __init__(self, carrier, delta, epsilon, name=None):
        self.carrier = carrier
        self.R = carrier.R
        self.S = carrier.S
        self.field = carrier.field
        self.dim = carrier.dim
        if delta.shape != (self.dim ** 2, self.dim):
            raise CoalgebroidError("delta must be %dx%d" % (self.dim ** 2, self.dim))
        if epsilon.shape != (self.S.dim, self.dim):
            raise CoalgebroidError("epsilon must be %dx%d" % (self.S.dim, self.dim))
        self.delta = delta
        self.epsilon = epsilon
        self.name = name or carrier.name
        self._t2 = None
        self._t3 = None
        self.parts = None      # (P, Q, presentation) for composites

    def __repr__(self):
        return "Coalgebroid(%s, %s|%s, dim=%d)" % (self.name, self.R.name, self.S.name, self.dim)

    @property
    def tensor_sq(self):
        """``C (x)_S C`` balanced by the upper actions."""
        if self._t2 is None:
            c = self.carrier
            self._t2 = TensorProduct(self.field, c.upper_right, c.upper_left, name=self.name + "(x)" + self.name)
        return self._t2

    @property
    def tensor_cube(self):
        """``(C (x)_S C) (x)_S C``."""
        if self._t3 is None:
            T2, c = self.tensor_sq, self.carrier
            I = self.field.eye(self.dim)
            right = [T2.induce_pair(I, u) for u in c.upper_right]
            self._t3 = TensorProduct(self.field, right, c.upper_left, T2.dim, self.dim, generators="generic")
        return self._t3

    def delta_q(self):
        """Comultiplication into ``C (x)_S C`` (quotient coordinates)."""
        return self.tensor_sq.project(self.delta)

    def cube_project(self, X):
        """Project a tensor of ``C (x)_k C (x)_k C`` given as ``dim^2 x dim`` (rows = first two factors)."""
        return self.tensor_cube.project_tensors([self.tensor_sq.project(X)])

    def upper(self, s, side):
        acts = self.carrier.upper_left if side == "left" else self.carrier.upper_right
        return combination(acts, s, self.field, (self.dim, self.dim))

    def lower(self, r, side):
        acts = self.carrier.lower_left if side == "left" else self.carrier.lower_right
        return combination(acts, r, self.field, (self.dim, self.dim))


def _counit_maps(C):
    """Matrices ``C (x)_k C -> C`` of ``x (x) y -> eps(x) * y`` and ``x * eps(y)``."""
    f, d, c = C.field, C.dim, C.carrier
    ops_l = [combination(c.upper_left, C.epsilon.column(a), f, (d, d)) for a in range(d)]
    ops_r = [combination(c.upper_right, C.epsilon.column(b), f, (d, d)) for b in range(d)]
    left = hstack(ops_l, f, d)
    right = hstack([hstack([ops_r[b].column(a) for b in range(d)], f, d) for a in range(d)], f, d)
    return left, right


def check_coalgebroid(C, prefix="cgd."):
    f, d, c = C.field, C.dim, C.carrier
    rep = Report(C.name or "coalgebroid")
    rep.merge(check_multimodule(c, prefix=prefix + "carrier."))
    T2 = C.tensor_sq
    I = f.eye(d)
    D = C.delta
    # coassociativity in (C (x)_S C) (x)_S C
    PD = T2.project(D)
    T3 = C.tensor_cube
    lhs = T3.project_tensors(PD @ D.column(x).reshape(d, d) for x in range(d))
    rhs = T3.project_tensors(T2.project((D.column(x).reshape(d, d) @ D.T).reshape(d * d, d)) for x in range(d))
    bad = [j for j in range(d) if lhs.column(j) != rhs.column(j)]
    rep.add(prefix + "coassociative", not bad, bad[:1] or None)
    # eps (x)_S id and id (x)_S eps must be well defined on C (x)_S C before the laws make sense
    left, right = _counit_maps(C)
    W = T2.relations()
    for key, m in (("counit_left", left), ("counit_right", right)):
        bad = [j for j in range(d) if (m @ D).column(j) != I.column(j)]
        if bad:
            rep.add(prefix + key, False, {"basis": bad[0]})
        elif W.cols and not (m @ W).is_zero():
            rep.add(prefix + key, False, {"ill_defined_on_relations": True})
        else:
            rep.add(prefix + key, True)
    S = C.S
    bad = []
    for s in range(S.dim):
        ul, ur = c.upper_left[s], c.upper_right[s]
        if T2.project(D @ ul) != T2.project(pair_apply(ul, I, D, d)):
            bad.append(["left", s])
        if T2.project(D @ ur) != T2.project(pair_apply(I, ur, D, d)):
            bad.append(["right", s])
    rep.add(prefix + "delta_S_bilinear", not bad, bad[:1] or None)
    bad = []
    for s in range(S.dim):
        if C.epsilon @ c.upper_left[s] != S.left[s] @ C.epsilon:
            bad.append(["left", s])
        if C.epsilon @ c.upper_right[s] != S.right[s] @ C.epsilon:
            bad.append(["right", s])
    rep.add(prefix + "epsilon_S_bilinear", not bad, bad[:1] or None)
    bad1, bad2, bad3 = [], [], []
    for r in range(C.R.dim):
        ll, lr = c.lower_left[r], c.lower_right[r]
        # Delta(r.c) = c1 (x) r.c2 and Delta(c.r') = c1.r' (x) c2
        if T2.project(D @ ll) != T2.project(pair_apply(I, ll, D, d)):
            bad1.append(["left", r])
        if T2.project(D @ lr) != T2.project(pair_apply(lr, I, D, d)):
            bad1.append(["right", r])
        # r.c1 (x) c2 = c1 (x) c2.r
        if T2.project(pair_apply(ll, I, D, d)) != T2.project(pair_apply(I, lr, D, d)):
            bad2.append(r)
        if C.epsilon @ ll != C.epsilon @ lr:
            bad3.append(r)
    rep.add(prefix + "delta_R_bimodule", not bad1, bad1[:1] or None)
    rep.add(prefix + "delta_R_centralizer", not bad2, bad2[:1] or None)
    rep.add(prefix + "epsilon_R_balanced", not bad3, bad3[:1] or None)
    return rep


class CoalgebroidMap:

    def __init__(self, source, target, matrix, name=None):
        if matrix.shape != (target.dim, source.dim):
            raise CoalgebroidError("map has shape %s, expected %s" % (matrix.shape, (target.dim, source.dim)))
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name

    def is_invertible(self):
        return self.matrix.is_square() and invert(self.matrix) is not None


def check_action_maps(alpha, P, Q, rep, prefix):
    """Commutation of ``alpha`` with all four actions of two multimodules."""
    pa, qa = P.actions(), Q.actions()
    for key in sorted(pa):
        bad = [i for i, (x, y) in enumerate(zip(pa[key], qa[key])) if alpha @ x != y @ alpha]
        rep.add(prefix + key, not bad, bad[:1] or None)


def check_coalgebroid_map(alpha, prefix="cgdmap."):
    P, Q, M = alpha.source, alpha.target, alpha.matrix
    if P.R.dim != Q.R.dim or P.S.dim != Q.S.dim:
        raise CoalgebroidError("base mismatch")
    rep = Report(alpha.name or "coalgebroid map")
    check_action_maps(M, P.carrier, Q.carrier, rep, prefix + "commutes.")
    T = Q.tensor_sq
    lhs = T.project(pair_apply(M, M, P.delta, P.dim))
    rhs = T.project(Q.delta @ M)
    bad = [j for j in range(P.dim) if lhs.column(j) != rhs.column(j)]
    rep.add(prefix + "comultiplicative", not bad, bad[:1] or None)
    bad = [j for j in range(P.dim) if (Q.epsilon @ M).column(j) != P.epsilon.column(j)]
    rep.add(prefix + "counital", not bad, bad[:1] or None)
    return rep


# Sweedler unit


def sweedler_multimodule(R):
    """``R (x) R`` with ``r*(a(x)b)*r' = ra (x) br'`` and ``r.(a(x)b).r' = ar' (x) rb``."""
    f, n = R.field, R.dim
    I = f.eye(n)
    return Multimodule(R, R,
                       lower_left=[kron(I, L) for L in R.left],
                       lower_right=[kron(Rt, I) for Rt in R.right],
                       upper_left=[kron(L, I) for L in R.left],
                       upper_right=[kron(I, Rt) for Rt in R.right], name="E(%s)" % R.name)


def sweedler_unit(R):
    """The Sweedler coring ``E(R)``: ``Delta(a(x)b) = (a(x)1)(x)(1(x)b)``, ``eps(a(x)b) = ab``."""
    f, n = R.field, R.dim
    I, u = f.eye(n), R.unit
    delta = kron(kron(I, u), kron(u, I))
    return Coalgebroid(sweedler_multimodule(R), delta, R.mu, name="E(%s)" % R.name)


# horizontal composition


def odot_presentation(P, Q):
    """``P (x)_{S^e} Q`` balanced by ``s*p*s' (x) q = p (x) s'.q.s``."""
    S = P.S
    if S.dim != Q.R.dim or P.field != Q.field:
        raise CoalgebroidError("middle bases do not match")
    pc, qc = P.carrier, Q.carrier
    m_right = [pc.upper_left[s] @ pc.upper_right[t] for s in range(S.dim) for t in range(S.dim)]
    n_left = [qc.lower_left[t] @ qc.lower_right[s] for s in range(S.dim) for t in range(S.dim)]
    return TensorProduct(P.field, m_right, n_left, P.dim, Q.dim, name="%s.%s" % (P.name, Q.name))


def compose_cgd(P, Q, name=None, check=True):
    """The R|T-coalgebroid ``P . Q`` for an R|S-coalgebroid P and an S|T-coalgebroid Q."""
    f = P.field
    T = odot_presentation(P, Q)
    pc, qc = P.carrier, Q.carrier
    IP, IQ = f.eye(P.dim), f.eye(Q.dim)
    carrier = Multimodule(
        P.R, Q.S,
        lower_left=[T.induce_pair(x, IQ) for x in pc.lower_left],
        lower_right=[T.induce_pair(x, IQ) for x in pc.lower_right],
        upper_left=[T.induce_pair(IP, y) for y in qc.upper_left],
        upper_right=[T.induce_pair(IP, y) for y in qc.upper_right],
        name=name or T.name)
    Pi = T.projection
    dC = T.dim
    dp, dq = P.delta, Q.delta
    # Delta(p_m . q_n) = sum Delta(p)_{ab} Delta(q)_{ce} (p_a . q_c) (x) (p_b . q_e)
    terms_p = [dp.column(m).reshape(P.dim, P.dim).nonzero() for m in range(P.dim)]
    terms_q = [dq.column(n).reshape(Q.dim, Q.dim).nonzero() for n in range(Q.dim)]
    full = []
    for m in range(P.dim):
        for n in range(Q.dim):
            coef = {}
            for a, b, v in terms_p[m]:
                for c, e, w in terms_q[n]:
                    key = (a * Q.dim + c, b * Q.dim + e)
                    coef[key] = coef.get(key, 0) + v * w
            full.append(bilinear_pairs(Pi, coef, f).vec())
    full = hstack(full, f, dC * dC)
    # eps(p . q) = eps_Q(eps_P(p) . q)
    eps_cols = []
    for m in range(P.dim):
        op = combination(qc.lower_left, P.epsilon.column(m), f, (Q.dim, Q.dim))
        E = Q.epsilon @ op
        eps_cols.extend(E.column(n) for n in range(Q.dim))
    eps_full = hstack(eps_cols, f, Q.S.dim)
    C = Coalgebroid(carrier, full @ T.section, eps_full @ T.section, name=carrier.name)
    if check:
        W = T.relations()
        if W.cols:
            if not (eps_full @ W).is_zero():
                raise IllDefinedError("counit of the composite is not well defined")
            if not C.tensor_sq.project(full @ W).is_zero():
                raise IllDefinedError("comultiplication of the composite is not well defined")
    C.parts = (P, Q, T)
    return C


def bilinear_pairs(Pi, coef, f):
    """``sum coef[(x, y)] Pi[:, x] Pi[:, y]^T``."""
    if not coef:
        return f.zeros(Pi.rows, Pi.rows)
    xs = sorted({x for x, _ in coef})
    ys = sorted({y for _, y in coef})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    K = f.from_sparse(len(xs), len(ys), {(xi[x], yi[y]): v for (x, y), v in coef.items()})
    return Pi.submatrix(range(Pi.rows), xs) @ K @ Pi.submatrix(range(Pi.rows), ys).T


# coherence


def associator(O, P, Q, OP=None, PQ=None, OP_Q=None, O_PQ=None):
    """Reindexing ``(o . p) . q -> o . (p . q)`` on basis representatives."""
    OP = OP or compose_cgd(O, P)
    PQ = PQ or compose_cgd(P, Q)
    left = OP_Q or compose_cgd(OP, Q)
    right = O_PQ or compose_cgd(O, PQ)
    f = O.field
    T_left, T_op = left.parts[2], OP.parts[2]
    T_right, T_pq = right.parts[2], PQ.parts[2]
    cols = []
    for t, l in T_left.basis_pairs:
        m, n = T_op.basis_pairs[t]
        pq = T_pq.pure(f.unit_vector(P.dim, n), f.unit_vector(Q.dim, l))
        cols.append(T_right.pure(f.unit_vector(O.dim, m), pq))
    return CoalgebroidMap(left, right, hstack(cols, f, right.dim), name="associator")


def left_unitor(P, EP=None):
    """``E(R) . P -> P``, ``(a (x) b) . p -> b.p.a``."""
    R = P.R
    EP = EP or compose_cgd(sweedler_unit(R), P)
    f, n = P.field, R.dim
    pc = P.carrier
    cols = []
    for t, x in EP.parts[2].basis_pairs:
        i, j = divmod(t, n)
        cols.append(pc.lower_left[j] @ pc.lower_right[i] @ f.unit_vector(P.dim, x))
    return CoalgebroidMap(EP, P, hstack(cols, f, P.dim), name="left unitor")


def right_unitor(P, PE=None):
    """``P . E(S) -> P``, ``p . (a (x) b) -> a*p*b``."""
    S = P.S
    PE = PE or compose_cgd(P, sweedler_unit(S))
    f, n = P.field, S.dim
    pc = P.carrier
    cols = []
    for m, t in PE.parts[2].basis_pairs:
        i, j = divmod(t, n)
        cols.append(pc.upper_left[i] @ pc.upper_right[j] @ f.unit_vector(P.dim, m))
    return CoalgebroidMap(PE, P, hstack(cols, f, P.dim), name="right unitor")


def _iso_report(rep, key, alpha):
    sub = check_coalgebroid_map(alpha, prefix="")
    rep.merge(sub, prefix=key + ".")
    rep.add(key + ".invertible", alpha.is_invertible())


def coherence_check(O, P=None, Q=None):
    """Unit isomorphisms for each given coalgebroid and, for a composable
    triple, the associativity isomorphism."""
    rep = Report("coherence")
    chain = [c for c in (O, P, Q) if c is not None]
    for i, C in enumerate(chain):
        _iso_report(rep, "unit_left.%d" % i, left_unitor(C))
        _iso_report(rep, "unit_right.%d" % i, right_unitor(C))
    if len(chain) == 3:
        _iso_report(rep, "associator", associator(O, P, Q))
    return rep


__all__ = [
    "Coalgebroid", "CoalgebroidError", "CoalgebroidMap", "IllDefinedError", "ModuleError",
    "associator", "bilinear_pairs", "check_coalgebroid", "check_coalgebroid_map", "coherence_check",
    "compose_cgd", "left_unitor", "odot_presentation", "pair_apply", "right_unitor",
    "sweedler_multimodule", "sweedler_unit",
]
