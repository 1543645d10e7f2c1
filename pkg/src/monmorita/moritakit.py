"""
1-cells and 2-cells between bialgebroids, the hom-functor they induce on
right modules, strong comonoids, endomorphism bialgebroids and Morita
verdicts.

A 1-cell ``P: B -> A`` (A over R, B over S) is an A-B-bimodule whose
comultiplication ``P -> P (x)_S P`` and counit ``P -> S`` make it a comonoid
among right B-modules.  Its multimodule structure is read off the actions:
``r.p.r' = s_A(r) t_A(r') |> p`` and ``s*p*s' = p <| t_B(s) s_B(s')``.
"""

from .algkit import FiniteAlgebra, ground_algebra
from .bgdkit import (
    Bialgebroid, BialgebroidError, BialgebroidMap, check_bialgebroid, check_bialgebroid_map,
    module_tensor, regular_module, trivial_module,
)
from .cgdkit import Coalgebroid, bilinear_pairs, check_coalgebroid, pair_apply
from .exactfield import hstack, invert, kron, solve
from .modkit import (
    Bimodule, IllDefinedError, ModuleError, Multimodule, TensorProduct, centralizer, check_bimodule, combination,
    hom_modules, progenerator_report,
)
from .report import Report


class CellError(ValueError):
    pass


class OneCell:
    """A 1-cell ``P: source -> target`` of bialgebroids.

    ``left_act[a]`` is ``p -> a |> p`` for basis a of the target's total
    algebra, ``right_act[b]`` is ``p -> p <| b``; ``delta`` is an ambient
    representative ``P -> P (x)_k P``.
    """

    def __init__(self, source, target, left_act, right_act, delta, epsilon, name=None):
        if source.field != target.field:
            raise CellError("field mismatch")
        self.source = source
        self.target = target
        self.field = source.field
        self.name = name or "P"
        self.bimodule = Bimodule(target.total, source.total, left_act, right_act, name=self.name)
        self.dim = self.bimodule.dim
        A, B = target, source
        carrier = Multimodule(
            A.base, B.base,
            lower_left=[self.act_left(A.s.column(r)) for r in range(A.base.dim)],
            lower_right=[self.act_left(A.t.column(r)) for r in range(A.base.dim)],
            upper_left=[self.act_right(B.t.column(s)) for s in range(B.base.dim)],
            upper_right=[self.act_right(B.s.column(s)) for s in range(B.base.dim)],
            name=self.name)
        self.coring = Coalgebroid(carrier, delta, epsilon, name=self.name)

    def __repr__(self):
        return "OneCell(%s: %s -> %s, dim=%d)" % (self.name, self.source.name, self.target.name, self.dim)

    @property
    def left_act(self):
        return self.bimodule.left_act

    @property
    def right_act(self):
        return self.bimodule.right_act

    @property
    def delta(self):
        return self.coring.delta

    @property
    def epsilon(self):
        return self.coring.epsilon

    @property
    def tensor_sq(self):
        return self.coring.tensor_sq

    def act_left(self, a):
        return combination(self.left_act, a, self.field, (self.dim, self.dim))

    def act_right(self, b):
        return combination(self.right_act, b, self.field, (self.dim, self.dim))

    def right_module(self):
        """``P_B`` forgetting the A-action."""
        return Bimodule(ground_algebra(self.field), self.source.total, [self.field.eye(self.dim)],
                        self.right_act, name=self.name)


def diagonal_apply(X, Y, Z, D, dim_in):
    """``sum_{x,y} Z[x, y] (X[x] (x) Y[y]) D`` for a coproduct representative Z."""
    out = None
    for x, y, v in Z.nonzero():
        u = pair_apply(X[x], Y[y], D, dim_in).scale(v)
        out = u if out is None else out + u
    return out if out is not None else D.field.zeros(X[0].rows * Y[0].rows, D.cols)


def check_one_cell(P, prefix="cell.", endpoints=False):
    """The 1-cell axioms, itemised: bimodule, comonoid, centralizer, A-compatibility of Delta and eps."""
    A, B, f, d = P.target, P.source, P.field, P.dim
    rep = Report(P.name)
    if endpoints:
        rep.add(prefix + "endpoints", check_bialgebroid(A).ok and check_bialgebroid(B).ok)
    # (1)
    rep.merge(check_bimodule(P.bimodule, prefix=prefix + "bimodule."))
    # (2) comonoid in right B-modules
    cr = check_coalgebroid(P.coring, prefix="")
    for key in ("coassociative", "counit_left", "counit_right"):
        rep.add(prefix + "comonoid." + key, cr.passed(key), cr.items[key]["witness"])
    D, eps = P.delta, P.epsilon
    PB = P.right_module()
    try:
        T, PP = module_tensor(PB, PB, B)
        TD = T.project(D)
        bad = [b for b in range(B.dim) if T.project(D @ P.right_act[b]) != PP.right_act[b] @ TD]
        rep.add(prefix + "comonoid.delta_B_linear", not bad, bad[:1] or None)
    except IllDefinedError as exc:
        rep.add(prefix + "comonoid.delta_B_linear", False, {"ill_defined": str(exc)})
    triv = trivial_module(B)
    bad = [b for b in range(B.dim) if eps @ P.right_act[b] != triv.right_act[b] @ eps]
    rep.add(prefix + "comonoid.epsilon_B_linear", not bad, bad[:1] or None)
    # (3) Delta_P lands in the R-centralizer of P (x)_S P
    T2 = P.tensor_sq
    I = f.eye(d)
    cl = P.coring.carrier
    Z = centralizer([T2.induce_pair(x, I) for x in cl.lower_left],
                    [T2.induce_pair(I, y) for y in cl.lower_right]) if A.base.dim else None
    DQ = T2.project(D)
    if Z is None or Z.cols == 0:
        inside = DQ.is_zero()
    else:
        inside = all(solve(Z, DQ.column(j)) is not None for j in range(d))
    rep.add(prefix + "delta_in_centralizer", inside)
    # (4) Delta(a |> p) = a1 |> p1 (x) a2 |> p2
    bad = []
    for a in range(A.dim):
        lhs = T2.project(D @ P.left_act[a])
        rhs = T2.project(diagonal_apply(P.left_act, P.left_act, A.delta_tensor(a), D, d))
        if lhs != rhs:
            bad.append(a)
    rep.add(prefix + "delta_A_compatible", not bad, bad[:1] or None)
    # (5) eps(a |> p) = eps(eps_A(a) . p)
    bad = [a for a in range(A.dim)
           if eps @ P.left_act[a] != eps @ P.act_left(A.s @ A.epsilon.column(a))]
    rep.add(prefix + "epsilon_A_compatible", not bad, bad[:1] or None)
    return rep


class TwoCell:

    def __init__(self, source, target, matrix, name=None):
        if matrix.shape != (target.dim, source.dim):
            raise CellError("2-cell has shape %s, expected %s" % (matrix.shape, (target.dim, source.dim)))
        if source.source is not target.source and source.source.dim != target.source.dim:
            raise CellError("endpoints differ")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name


def check_two_cell(alpha, prefix="2cell."):
    P, Q, M = alpha.source, alpha.target, alpha.matrix
    rep = Report(alpha.name or "2-cell")
    bad = [a for a, (x, y) in enumerate(zip(P.left_act, Q.left_act)) if M @ x != y @ M]
    rep.add(prefix + "left_linear", not bad, bad[:1] or None)
    bad = [b for b, (x, y) in enumerate(zip(P.right_act, Q.right_act)) if M @ x != y @ M]
    rep.add(prefix + "right_linear", not bad, bad[:1] or None)
    T = Q.tensor_sq
    lhs = T.project(pair_apply(M, M, P.delta, P.dim))
    rhs = T.project(Q.delta @ M)
    bad = [j for j in range(P.dim) if lhs.column(j) != rhs.column(j)]
    rep.add(prefix + "comultiplicative", not bad, bad[:1] or None)
    bad = [j for j in range(P.dim) if (Q.epsilon @ M).column(j) != P.epsilon.column(j)]
    rep.add(prefix + "counital", not bad, bad[:1] or None)
    return rep


def identity_two_cell(P):
    return TwoCell(P, P, P.field.eye(P.dim), name="id")


def regular_cell(A, name=None):
    """``A: A -> A`` with the regular bimodule and ``Delta_A``, ``eps_A``."""
    T = A.total
    return OneCell(A, A, T.left, T.right, A.delta, A.epsilon, name=name or "reg(%s)" % A.name)


def pullback_cell(F, check=True):
    """``f*: A -> B`` for a bialgebroid map ``f: A -> B``: B with ``a |> b = f(a) b``."""
    if check:
        rep = check_bialgebroid_map(F)
        if not rep.ok:
            raise BialgebroidError("not a bialgebroid map: %s" % ", ".join(rep.failures()))
    A, B = F.source, F.target
    T = B.total
    left = [T.lmul(F.matrix.column(a)) for a in range(A.dim)]
    return OneCell(B, A, left, T.right, B.delta, B.epsilon, name="%s*" % (F.name or "f"))


# the hom-functor Hom_B(P, -)


def hp_apply(P, M):
    """``Ha(P)(M) = Hom_B(P, M)`` with ``(mu <| a)(p) = mu(a |> p)``.

    Returns a right module over the target's total algebra; its ``hom``
    attribute is the underlying HomSpace.
    """
    f = P.field
    H = hom_modules(P.right_act, M.right_act, f, P.dim, M.dim)
    acts = []
    for L in P.left_act:
        if H.dim:
            acts.append(H.coords_many(hstack([(h @ L).vec() for h in H.basis], f, P.dim * M.dim)))
        else:
            acts.append(f.zeros(0, 0))
    out = Bimodule(ground_algebra(f), P.target.total, [f.eye(H.dim)], acts,
                   name="Hom(%s,%s)" % (P.name, M.name))
    out.hom = H
    return out


def _hom_pairs(T, HX, HY, H, build):
    """Matrix of the induced map on ``T`` (a tensor of two hom modules) into the
    HomSpace ``H``; ``build(x, y)`` gives the image of the basis pair.  Checks
    that ambient relations are killed."""
    f = H.field
    cols = [build(x, y).vec() for x in HX.basis for y in HY.basis]
    G = H.coords_many(hstack(cols, f, H.dim_p * H.dim_m)) if cols else f.zeros(H.dim, 0)
    full = hstack(cols, f, H.dim_p * H.dim_m) if cols else None
    if full is not None and H.vecs @ G != full:
        raise IllDefinedError("image is not a module map")
    W = T.relations()
    if W.cols and not (G @ W).is_zero():
        raise IllDefinedError("induced map is not balanced")
    return G @ T.section


class MonoidalMaps:
    """``map2: Ha(M) (x)_R Ha(N) -> Ha(M (x)_S N)`` and ``map0: R -> Ha(S)``."""

    def __init__(self, map2, map0, domain2, codomain2, codomain0, tensor_mn, tensor_dom):
        self.map2 = map2
        self.tensor_dom = tensor_dom
        self.map0 = map0
        self.domain2 = domain2
        self.codomain2 = codomain2
        self.codomain0 = codomain0
        self.tensor_mn = tensor_mn

    def invertible(self):
        ok2 = self.map2.is_square() and invert(self.map2) is not None
        ok0 = self.map0.is_square() and invert(self.map0) is not None
        return ok2, ok0


def hp_monoidal_maps(P, M, N):
    """Structure maps of ``Ha(P)``: ``mu (x) nu -> (mu (x) nu) Delta_P`` and ``r -> eps_P(r . -)``."""
    A, B, f = P.target, P.source, P.field
    HM, HN = hp_apply(P, M), hp_apply(P, N)
    Tdom, Dom = module_tensor(HM, HN, A)
    Tmn, MN = module_tensor(M, N, B)
    HMN = hp_apply(P, MN)
    D = P.delta
    map2 = _hom_pairs(Tdom, HM.hom, HN.hom, HMN.hom,
                      lambda x, y: Tmn.project(pair_apply(x, y, D, P.dim)))
    S = trivial_module(B)
    HS = hp_apply(P, S)
    cols = [P.epsilon @ P.act_left(A.s.column(r)) for r in range(A.base.dim)]
    map0 = HS.hom.coords_many(hstack([c.vec() for c in cols], f, P.dim * B.base.dim))
    return MonoidalMaps(map2, map0, Dom, HMN, HS, Tmn, Tdom)


# convolution and endomorphism algebras


def _algebra_from_basis(field, basis_mats, coords, mult, unit_coords, name):
    n = len(basis_mats)
    left = []
    for i in range(n):
        cols = [mult(basis_mats[i], basis_mats[j]).vec() for j in range(n)]
        left.append(coords(hstack(cols, field, cols[0].rows) if cols else None))
    return FiniteAlgebra(field, left, unit_coords, name)


def convolution_algebra(P):
    """``T = Hom_B(P, S)`` with ``(tau * tau')(p) = tau(p1) tau'(p2)``; returns ``(T, hom space)``."""
    B, f = P.source, P.field
    S = B.base
    H = hom_modules(P.right_act, trivial_module(B).right_act, f, P.dim, S.dim)
    if H.dim == 0:
        raise CellError("Hom_B(P, S) vanishes")
    D = P.delta

    def conv(x, y):
        return S.mu @ pair_apply(x, y, D, P.dim)

    unit = H.coords(P.epsilon)
    if unit is None:
        raise CellError("counit is not a module map")
    T = _algebra_from_basis(f, H.basis, H.coords_many, conv, unit, "Hom(%s,S)" % P.name)
    return T, H


def endomorphism_algebra(P):
    """``End_B(P)`` under composition; returns ``(E, hom space)``."""
    f = P.field
    H = hom_modules(P.right_act, P.right_act, f, P.dim, P.dim)
    unit = H.coords(f.eye(P.dim))
    E = _algebra_from_basis(f, H.basis, H.coords_many, lambda x, y: x @ y, unit, "End(%s)" % P.name)
    return E, H


def _source_target(P, T, HT, HE):
    """Matrices of ``s_E(tau) = (P (x) tau) Delta_P`` and ``t_E(tau) = (tau (x) P) Delta_P``."""
    B, f, d = P.source, P.field, P.dim
    D = P.delta
    s_cols, t_cols = [], []
    for tau in HT.basis:
        via_s = [P.act_right(B.s @ tau.column(y)) for y in range(d)]
        via_t = [P.act_right(B.t @ tau.column(x)) for x in range(d)]
        S_op, T_op = [], []
        for p in range(d):
            Z = D.column(p).reshape(d, d)
            acc_s = f.zeros(d, 1)
            acc_t = f.zeros(d, 1)
            for x, y, v in Z.nonzero():
                acc_s = acc_s + via_s[y].column(x).scale(v)
                acc_t = acc_t + via_t[x].column(y).scale(v)
            S_op.append(acc_s)
            T_op.append(acc_t)
        s_cols.append(hstack(S_op, f, d).vec())
        t_cols.append(hstack(T_op, f, d).vec())
    s = HE.coords_many(hstack(s_cols, f, d * d))
    t = HE.coords_many(hstack(t_cols, f, d * d))
    return s, t


# strongness


def _tensor_over_base(E, s, t):
    """``E (x)_T E`` for ``alpha * tau = alpha s(tau)`` and ``tau * beta = beta t(tau)``."""
    f = E.field
    return TensorProduct(f, [E.rmul(s.column(k)) for k in range(s.cols)],
                         [E.rmul(t.column(k)) for k in range(t.cols)], E.dim, E.dim, name="E(x)_TE")


def _is_iso(M):
    return M.is_square() and invert(M) is not None


class StrongnessData:
    """Everything computed while deciding strongness; reused by the endomorphism bialgebroid."""

    def __init__(self, P):
        self.P = P
        B, f = P.source, P.field
        self.T, self.HT = convolution_algebra(P)
        self.E, self.HE = endomorphism_algebra(P)
        self.s, self.t = _source_target(P, self.T, self.HT, self.HE)
        self.TEE = _tensor_over_base(self.E, self.s, self.t)
        PB = P.right_module()
        self.Tpp, self.PP = module_tensor(PB, PB, B)
        self.H2 = hom_modules(P.right_act, self.PP.right_act, f, P.dim, self.Tpp.dim)
        D = P.delta
        self.phi = _hom_pairs(self.TEE, self.HE, self.HE, self.H2,
                              lambda x, y: self.Tpp.project(pair_apply(x, y, D, P.dim)))

    def variant1(self):
        """``Q (x)_T Q -> Hom_B(P, B (x)_S B)`` for ``Q = Hom_B(P, B)``."""
        P, B, f, d = self.P, self.P.source, self.P.field, self.P.dim
        HQ = hom_modules(P.right_act, B.total.right, f, d, B.dim)
        D = P.delta
        Zs = [D.column(p).reshape(d, d) for p in range(d)]
        lacts, racts = [], []
        for tau in self.HT.basis:
            ups_t = [B.total.rmul(B.t @ tau.column(x)) for x in range(d)]
            ups_s = [B.total.rmul(B.s @ tau.column(y)) for y in range(d)]
            lcols, rcols = [], []
            for q in HQ.basis:
                L = f.zeros(B.dim, d)
                Rm = f.zeros(B.dim, d)
                cl, cr = [], []
                for Z in Zs:
                    accl = f.zeros(B.dim, 1)
                    accr = f.zeros(B.dim, 1)
                    for x, y, v in Z.nonzero():
                        # (t.q)(p) = q(p2) t_B(t(p1)),  (q.t)(p) = q(p1) s_B(t(p2))
                        accl = accl + (ups_t[x] @ q.column(y)).scale(v)
                        accr = accr + (ups_s[y] @ q.column(x)).scale(v)
                    cl.append(accl)
                    cr.append(accr)
                lcols.append(hstack(cl, f, B.dim).vec())
                rcols.append(hstack(cr, f, B.dim).vec())
            lacts.append(HQ.coords_many(hstack(lcols, f, B.dim * d)))
            racts.append(HQ.coords_many(hstack(rcols, f, B.dim * d)))
        TQQ = TensorProduct(f, racts, lacts, HQ.dim, HQ.dim, name="Q(x)_TQ")
        RB = regular_module(B)
        Tbb, BB = module_tensor(RB, RB, B)
        Hbb = hom_modules(P.right_act, BB.right_act, f, d, Tbb.dim)
        psi = _hom_pairs(TQQ, HQ, HQ, Hbb, lambda x, y: Tbb.project(pair_apply(x, y, D, d)))
        return psi


def strongness_check(P, data=None):
    """Strongness of the comonoid ``P`` in right B-modules.

    With P_B a progenerator both maps of the criterion are built and must be
    invertible; with P_B only projective the first one; otherwise the
    structure maps of ``Ha(P)`` on the regular module decide.  The route is
    recorded in ``meta["route"]``.
    """
    rep = Report(P.name)
    prog = progenerator_report(P.bimodule)
    projective, generator = prog.passed("progen.projective"), prog.passed("progen.generator")
    routes = []
    if projective and data is None:
        try:
            data = StrongnessData(P)
        except (CellError, ModuleError) as exc:
            rep.add("strong.construction", False, {"error": str(exc)})
            rep.meta["route"] = "none"
            rep.data = None
            return rep
    if projective:
        psi = data.variant1()
        rep.add("strong.variant1", _is_iso(psi), {"shape": list(psi.shape), "rank": psi.rank()})
        routes.append("variant1")
        if generator:
            phi = data.phi
            rep.add("strong.variant2", _is_iso(phi), {"shape": list(phi.shape), "rank": phi.rank()})
            routes.append("variant2")
    if not (projective and generator):
        B = P.source
        RB = regular_module(B)
        try:
            mm = hp_monoidal_maps(P, RB, RB)
            ok2, ok0 = mm.invertible()
        except IllDefinedError as exc:
            ok2, ok0 = False, False
            rep.meta["ill_defined"] = str(exc)
        rep.add("strong.direct_map2", ok2)
        rep.add("strong.direct_map0", ok0)
        routes.append("generator_pair")
    rep.meta["route"] = "+".join(routes)
    rep.data = data
    return rep


# endomorphism bialgebroid


class EndoBialgebroid:
    """``End_B(P)`` over ``T = Hom_B(P, S)``, together with the cell ``_E P_B``."""

    def __init__(self, P, data, bialgebroid):
        self.P = P
        self.data = data
        self.bialgebroid = bialgebroid
        self.E = data.E
        self.T = data.T
        self.hom_E = data.HE
        self.hom_T = data.HT
        self.cell = OneCell(P.source, bialgebroid, data.HE.basis, P.right_act, P.delta, P.epsilon,
                            name="%s_E" % P.name)


def endomorphism_bialgebroid(P, data=None):
    data = data or StrongnessData(P)
    phi_inv = invert(data.phi) if data.phi.is_square() else None
    if phi_inv is None:
        raise CellError("P is not strong: E (x)_T E -> Hom_B(P, P (x)_S P) is not invertible")
    f, d = P.field, P.dim
    D = P.delta
    imgs = hstack([data.Tpp.project(D @ alpha).vec() for alpha in data.HE.basis], f, data.Tpp.dim * d)
    coords = data.H2.coords_many(imgs)
    if data.H2.vecs @ coords != imgs:
        raise CellError("Delta_P composed with an endomorphism is not a module map")
    delta = data.TEE.section @ (phi_inv @ coords)
    eps = data.HT.coords_many(hstack([(P.epsilon @ alpha).vec() for alpha in data.HE.basis], f,
                                     P.epsilon.rows * d))
    E = Bialgebroid(data.E, data.T, data.s, data.t, delta, eps, name="End(%s)" % P.name)
    return EndoBialgebroid(P, data, E)


def lambda_map(P, endo):
    """``lambda_P: A -> End_B(P)``, ``a -> (p -> a |> p)``."""
    f = P.field
    H = endo.hom_E
    lam = H.coords_many(hstack([L.vec() for L in P.left_act], f, P.dim * P.dim))
    return BialgebroidMap(P.target, endo.bialgebroid, lam, name="lambda_%s" % P.name)


# horizontal composition


def compose_bgd(P, Q, name=None, check=True):
    """``P (x)_B Q: C -> A`` for ``P: B -> A`` and ``Q: C -> B``.

    ``Delta(p (x) q) = (p1 (x) q1) (x) (p2 (x) q2)``, ``eps(p (x) q) = eps_Q(eps_P(p) . q)``.
    """
    if P.source.dim != Q.target.dim or P.field != Q.field:
        raise CellError("middle bialgebroids do not match")
    f = P.field
    B = P.source
    T = TensorProduct(f, P.right_act, Q.left_act, P.dim, Q.dim, name="%s(x)%s" % (P.name, Q.name))
    IP, IQ = f.eye(P.dim), f.eye(Q.dim)
    left = [T.induce_pair(L, IQ) for L in P.left_act]
    right = [T.induce_pair(IP, Rc) for Rc in Q.right_act]
    Pi = T.projection
    terms_p = [P.delta.column(m).reshape(P.dim, P.dim).nonzero() for m in range(P.dim)]
    terms_q = [Q.delta.column(n).reshape(Q.dim, Q.dim).nonzero() for n in range(Q.dim)]
    full = []
    for m in range(P.dim):
        for n in range(Q.dim):
            coef = {}
            for a, b, v in terms_p[m]:
                for c, e, w in terms_q[n]:
                    key = (a * Q.dim + c, b * Q.dim + e)
                    coef[key] = coef.get(key, 0) + v * w
            full.append(bilinear_pairs(Pi, coef, f).vec())
    full = hstack(full, f, T.dim * T.dim)
    eps_cols = []
    for m in range(P.dim):
        E = Q.epsilon @ Q.act_left(B.s @ P.epsilon.column(m))
        eps_cols.extend(E.column(n) for n in range(Q.dim))
    eps_full = hstack(eps_cols, f, Q.epsilon.rows)
    C = OneCell(Q.source, P.target, left, right, full @ T.section, eps_full @ T.section,
                name=name or T.name)
    if check:
        W = T.relations()
        if W.cols:
            if not (eps_full @ W).is_zero():
                raise IllDefinedError("counit of the composite is not well defined")
            if not C.tensor_sq.project(full @ W).is_zero():
                raise IllDefinedError("comultiplication of the composite is not well defined")
    C.parts = (P, Q, T)
    return C


def hom_adjunction_dims(P, Q, M, PQ=None):
    """``(dim Hom_B(P, Hom_C(Q, M)), dim Hom_C(P (x)_B Q, M))``."""
    PQ = PQ or compose_bgd(P, Q, check=False)
    inner = hp_apply(Q, M)
    lhs = hom_modules(P.right_act, inner.right_act, P.field, P.dim, inner.dim).dim
    rhs = hom_modules(PQ.right_act, M.right_act, P.field, PQ.dim, M.dim).dim
    return lhs, rhs


# Morita verdicts


def morita_verdict(P, check_cell=True):
    """Is ``P: B -> A`` a monoidal Morita equivalence?

    Stages: the cell axioms, the progenerator property of ``P_B``,
    strongness, and ``lambda_P`` being a bialgebroid isomorphism.  Later
    stages are skipped once one fails; ``meta["first_failure"]`` names the
    first failing check in stage order.  On success ``meta["certificate"]``
    holds the witnesses.
    """
    rep = Report(P.name)
    stages = []
    first = None

    def stage(name, sub):
        nonlocal first
        stages.append(name)
        rep.merge(sub)
        if first is None and not sub.ok:
            first = next(k for k in sub.items if not sub.items[k]["pass"])
        return sub.ok

    ok = True
    if check_cell:
        ok = stage("cell", check_one_cell(P))
    prog = progenerator_report(P.bimodule)
    if ok:
        ok = stage("progenerator", prog)
    strong = None
    if ok:
        strong = strongness_check(P)
        ok = stage("strongness", strong)
    lam = lam_inv = None
    endo = None
    if ok:
        sub = Report(P.name)
        try:
            endo = endomorphism_bialgebroid(P, strong.data)
            F = lambda_map(P, endo)
            lr = check_bialgebroid_map(F, prefix="lambda.")
            sub.merge(lr)
            sub.add("lambda.isomorphism", lr.meta["isomorphism"], {"rank": F.matrix.rank(), "dim_A": P.target.dim,
                                                                   "dim_E": endo.E.dim})
            lam = F.matrix
            lam_inv = invert(lam) if lam.is_square() else None
        except CellError as exc:
            sub.add("lambda.isomorphism", False, {"error": str(exc)})
        ok = stage("lambda", sub)
    rep.meta["stages"] = stages
    rep.meta["first_failure"] = first
    rep.meta["equivalent"] = ok
    if ok:
        H, x = _dual_basis_witness(P)
        rep.meta["certificate"] = {
            "dual_basis": {"hom_basis": H.vecs, "coefficients": x},
            "trace_ideal": prog.items["progen.generator"]["witness"],
            "strongness_route": strong.meta["route"],
            "strongness_inverse": invert(strong.data.phi),
            "lambda": lam,
            "lambda_inverse": lam_inv,
            "dims": {"A": P.target.dim, "B": P.source.dim, "P": P.dim, "E": endo.E.dim, "T": endo.T.dim},
        }
    return rep


def _dual_basis_witness(P):
    from .modkit import dual_basis
    return dual_basis(P.bimodule)


# Frobenius structures and antipodes


class FrobeniusData:
    """Multiplication ``nu: P (x) P -> P`` (ambient, ``d x d^2``) and invariant ``iota: S -> P``."""

    def __init__(self, nu, iota):
        self.nu = nu
        self.iota = iota


def _right_ops(P, images):
    return [P.act_right(images.column(k)) for k in range(images.cols)]


def solve_evaluation(P, iota):
    """An ``ev: P (x)_S P -> S`` for which ``Delta_P iota(1)`` is a coevaluation, or None."""
    B, f, d = P.source, P.field, P.dim
    dS = B.base.dim
    C = (P.delta @ (iota @ B.base.unit)).reshape(d, d)
    U = _right_ops(P, B.t)      # s * q = q <| t(s)
    V = _right_ops(P, B.s)      # q * s = q <| s(s)
    n_unk = dS * d * d
    items, rhs, row = {}, {}, 0
    Ct = C.T
    for p in range(d):
        for k in range(dS):
            M1 = U[k] @ Ct
            M2 = V[k] @ C
            for z in range(d):
                for a in range(d):
                    if M1[z, a]:
                        items[(row + z, k * d * d + p * d + a)] = M1[z, a]
                    if M2[z, a]:
                        items[(row + d + z, k * d * d + a * d + p)] = M2[z, a]
        rhs[(row + p, 0)] = 1
        rhs[(row + d + p, 0)] = 1
        row += 2 * d
    W = P.tensor_sq.relations()
    for c in range(W.cols):
        w = W.column(c)
        for k in range(dS):
            for j, _, v in w.nonzero():
                items[(row, k * d * d + j)] = v
            row += 1
    X = solve(f.from_sparse(row, n_unk, items), f.from_sparse(row, 1, rhs))
    if X is None:
        return None
    return X.reshape(dS, d * d)


def frobenius_check(P, F):
    """``<P, nu, iota>`` is an algebra in right B-modules, Frobenius-compatible
    with ``<Delta_P, eps_P>``, and ``Delta_P iota`` is a coevaluation for a solved
    evaluation (``meta["ev"]``)."""
    B, f, d = P.source, P.field, P.dim
    nu, iota = F.nu, F.iota
    rep = Report(P.name)
    I = f.eye(d)
    T2 = P.tensor_sq
    W = T2.relations()
    rep.add("frob.nu_well_defined", not W.cols or (nu @ W).is_zero())
    bad = []
    for b in range(B.dim):
        Fb = None
        for x, y, v in B.delta_tensor(b).nonzero():
            u = kron(P.right_act[x], P.right_act[y]).scale(v)
            Fb = u if Fb is None else Fb + u
        if nu @ Fb != P.right_act[b] @ nu:
            bad.append(b)
    rep.add("frob.nu_B_linear", not bad, bad[:1] or None)
    rep.add("frob.associative", nu @ kron(nu, I) == nu @ kron(I, nu))
    dS = B.base.dim
    ul = all(nu @ kron(iota.column(s), I) == P.act_right(B.t.column(s)) for s in range(dS))
    ur = all(nu @ kron(I, iota.column(s)) == P.act_right(B.s.column(s)) for s in range(dS))
    rep.add("frob.unit_left", ul)
    rep.add("frob.unit_right", ur)
    triv = trivial_module(B)
    bad = [b for b in range(B.dim) if iota @ triv.right_act[b] != P.right_act[b] @ iota]
    rep.add("frob.iota_B_linear", not bad, bad[:1] or None)
    D = P.delta
    lhs = T2.project(D @ nu)
    rep.add("frob.compatible_left", lhs == T2.project(kron(nu, I) @ kron(I, D)))
    rep.add("frob.compatible_right", lhs == T2.project(kron(I, nu) @ kron(D, I)))
    ev = solve_evaluation(P, iota)
    rep.add("frob.evaluation", ev is not None, {"ev": ev})
    rep.meta["ev"] = ev
    return rep


def antipode(P, F, endo=None):
    """``S_E(alpha)(p) = c1 <| s_B(eps_P(nu(alpha(c2) (x) p))))`` with ``c = Delta_P iota(1)``.

    Returns ``(matrix of S_E on the End basis, report)``.
    """
    endo = endo or endomorphism_bialgebroid(P)
    B, f, d = P.source, P.field, P.dim
    E, HE = endo.E, endo.hom_E
    C = (P.delta @ (F.iota @ B.base.unit)).reshape(d, d)
    terms = C.nonzero()
    nu_p = [F.nu.submatrix(range(d), [x * d + p for x in range(d)]) for p in range(d)]
    cols = []
    for alpha in HE.basis:
        out = []
        for p in range(d):
            acc = f.zeros(d, 1)
            for a, b, v in terms:
                val = P.epsilon @ (nu_p[p] @ alpha.column(b))
                acc = acc + P.act_right(B.s @ val).column(a).scale(v)
            out.append(acc)
        cols.append(hstack(out, f, d).vec())
    imgs = hstack(cols, f, d * d)
    S = HE.coords_many(imgs)
    rep = Report("antipode(%s)" % P.name)
    rep.add("antipode.module_maps", HE.vecs @ S == imgs)
    one = E.unit
    rep.add("antipode.unital", S @ one == one)
    bad = None
    for i in range(E.dim):
        # S(e_i e_j) = S(e_j) S(e_i) for all j
        lhs = S @ E.left[i]
        rhs = E.rmul(S.column(i)) @ S
        if lhs != rhs:
            bad = [i, next(c for (_, c, _) in (lhs - rhs).nonzero())]
            break
    rep.add("antipode.antimultiplicative", bad is None, bad)
    ell = HE.coords(F.iota @ P.epsilon)
    Eb = endo.bialgebroid
    if ell is None:
        rep.add("antipode.integral", False, {"reason": "iota pi is not a module map"})
    else:
        L = E.lmul(ell)
        ok = all(L @ E.basis(i) == L @ (Eb.s @ Eb.epsilon.column(i)) for i in range(E.dim))
        rep.add("antipode.integral", ok, {"element": ell})
    return S, rep


__all__ = [
    "CellError", "EndoBialgebroid", "FrobeniusData", "MonoidalMaps", "OneCell", "StrongnessData", "TwoCell",
    "antipode", "check_one_cell", "check_two_cell", "compose_bgd", "convolution_algebra", "diagonal_apply",
    "endomorphism_algebra", "endomorphism_bialgebroid", "frobenius_check", "hom_adjunction_dims",
    "hp_apply", "hp_monoidal_maps", "identity_two_cell", "lambda_map", "morita_verdict", "pullback_cell",
    "regular_cell", "solve_evaluation", "strongness_check",
]
