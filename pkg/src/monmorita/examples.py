"""
Builders for the standard example families: Azumaya cells, matrix blow-ups
of bialgebras, Drinfeld twists and base change along square-root Morita
equivalences.  Every builder returns plain objects; nothing is trusted, the
checkers re-verify all of them.
"""

from .algkit import (
    cyclic_group_table, diagonal_algebra, ground_algebra, group_algebra, matrix_algebra, product_group_table,
    tensor_algebras,
)
from .algkit import FiniteAlgebra
from .bgdkit import Bialgebroid, BialgebroidError, sweedler_bialgebroid
from .cgdkit import CoalgebroidMap, check_coalgebroid_map, compose_cgd, sweedler_unit
from .exactfield import hstack, invert, kernel_basis, kron, solve, vstack
from .moritakit import OneCell


class ExampleError(ValueError):
    pass


def group_bialgebroid(field, table, name=None):
    """The group bialgebra k[G] (``g -> g (x) g``, ``eps(g) = 1``) as a bialgebroid over k."""
    T = group_algebra(field, table, name=name)
    n = T.dim
    k = ground_algebra(field)
    delta = field.from_sparse(n * n, n, {(g * n + g, g): 1 for g in range(n)})
    eps = field.from_entries(1, n, [1] * n)
    return Bialgebroid(T, k, T.unit, T.unit, delta, eps, name=T.name)


# Azumaya cells


def build_azumaya_cell(R):
    """``R: E(R) -> E(k)``: ``r <| (r1 (x) r2) = r1 r r2``, ``Delta(r) = r (x) 1``, ``eps(r) = r``."""
    f, n = R.field, R.dim
    E, Ek = sweedler_bialgebroid(R), sweedler_bialgebroid(ground_algebra(f))
    right = [R.left[a] @ R.right[b] for a in range(n) for b in range(n)]
    delta = kron(f.eye(n), R.unit)
    return OneCell(E, Ek, [f.eye(n)], right, delta, f.eye(n), name="Az(%s)" % R.name)


def separability_data(R):
    """A balanced element ``w = sum w[x, y] e_x (x) e_y`` (``sum x r (x) y = sum x (x) r y``)
    together with a functional ``tau`` such that ``sum tau(x q) y = q = sum x q tau(y)``.

    ``tau`` is looked for among trace-like functionals (vanishing on commutators);
    for each candidate the conditions on ``w`` are linear.  Returns ``(w, tau)``
    or None (R is then not central separable).
    """
    f, n = R.field, R.dim
    I = f.eye(n)
    K = kernel_basis(vstack([kron(R.right[r], I) - kron(I, R.left[r]) for r in range(n)], f, n * n))
    traces = kernel_basis(vstack([(R.left[a] - R.right[a]).T for a in range(n)], f, n))
    if K.cols == 0 or traces.cols == 0:
        return None
    Ws = [K.column(k).reshape(n, n) for k in range(K.cols)]
    rhs = vstack([f.unit_vector(n, q) for q in range(n)] * 2, f, 1)
    candidates = [traces.column(c).T for c in range(traces.cols)]
    if traces.cols > 1:
        candidates.append(hstack([traces.column(c) for c in range(traces.cols)], f, n) @ f.column([1] * traces.cols))
        candidates[-1] = candidates[-1].T
    for tau in candidates:
        cols = []
        for W in Ws:
            # tau R_q w = e_q^T  and  R_q w tau^T = e_q
            parts = [(tau @ R.right[q] @ W).T for q in range(n)] + [R.right[q] @ W @ tau.T for q in range(n)]
            cols.append(vstack(parts, f, 1))
        c = solve(hstack(cols, f, 2 * n * n), rhs)
        if c is not None:
            w = f.zeros(n, n)
            for k, W in enumerate(Ws):
                w = w + W.scale(c[k, 0])
            return w, tau
    return None


def build_inverse_azumaya_cell(R):
    """``R: E(k) -> E(R)`` with ``(r1 (x) r2) |> q = r2 q r1``, ``Delta(q) = sum x q (x) y``, ``eps = tau``."""
    data = separability_data(R)
    if data is None:
        raise ExampleError("%s has no separability data; no inverse cell" % R.name)
    w, tau = data
    f, n = R.field, R.dim
    E, Ek = sweedler_bialgebroid(R), sweedler_bialgebroid(ground_algebra(f))
    left = [R.left[b] @ R.right[a] for a in range(n) for b in range(n)]
    delta = hstack([(R.right[q] @ w).vec() for q in range(n)], f, n * n)
    return OneCell(Ek, E, left, [f.eye(n)], delta, tau, name="Az(%s)^-1" % R.name)


# blow-ups


def build_blowup(B, n, eps_form="diagonal"):
    """``A = Mat_n(B)`` over ``Diag_n`` and the cell ``P = B^n: B -> A``.

    Basis of A: ``e_ij (x) b`` at ``(i*n + j)*dim B + b``; of P: ``e_i (x) b`` at ``i*dim B + b``.
    ``Delta_A(e_ij b) = (e_ij b1) (x) (e_ij b2)``, ``eps_A(e_ij b) = eps_B(b) e_j``.
    ``eps_form="scalar"`` instead uses ``eps_B(b) 1`` (a deliberately broken counit).
    """
    if B.base.dim != 1:
        raise ExampleError("blow-up needs a bialgebra (base k)")
    if n < 1:
        raise ExampleError("n must be >= 1")
    f, dB = B.field, B.dim
    Mn = matrix_algebra(f, n)
    total = tensor_algebras(Mn, B.total, name="Mat%d(%s)" % (n, B.name))
    R = diagonal_algebra(f, n)
    dA = total.dim
    st = kron(f.from_sparse(n * n, n, {(i * n + i, i): 1 for i in range(n)}), B.total.unit)
    items, eps = {}, {}
    for i in range(n):
        for j in range(n):
            u = i * n + j
            for b in range(dB):
                col = u * dB + b
                for x, y, v in B.delta_tensor(b).nonzero():
                    row = (u * dB + x) * dA + (u * dB + y)
                    items[(row, col)] = items.get((row, col), 0) + v
                e = B.epsilon[0, b]
                if e:
                    if eps_form == "diagonal":
                        eps[(j, col)] = e
                    else:
                        for k in range(n):
                            eps[(k, col)] = e
    delta = f.from_sparse(dA * dA, dA, items)
    A = Bialgebroid(total, R, st, st, delta, f.from_sparse(n, dA, eps), name=total.name)
    # P = B^n
    dP = n * dB
    left = [kron(f.from_sparse(n, n, {(i, j): 1}), L) for i in range(n) for j in range(n) for L in B.total.left]
    right = [kron(f.eye(n), Rb) for Rb in B.total.right]
    items = {}
    for i in range(n):
        for b in range(dB):
            for x, y, v in B.delta_tensor(b).nonzero():
                items[((i * dB + x) * dP + i * dB + y, i * dB + b)] = v
    pdelta = f.from_sparse(dP * dP, dP, items)
    peps = kron(f.from_entries(1, n, [1] * n), B.epsilon)
    P = OneCell(B, A, left, right, pdelta, peps, name="%s^%d" % (B.name, n))
    return A, P


# Drinfeld twists


def root_of_unity(field, n):
    """A primitive n-th root of unity in the field, or None."""
    if n == 1:
        return field.one
    if field.p is None:
        return field(-1) if n == 2 else None
    if (field.p - 1) % n:
        return None
    for c in range(2, field.p):
        z = field(c)
        if z ** n == field.one and all(z ** k != field.one for k in range(1, n)):
            return z
    return None


def abelian_group_table(orders):
    """``Z/n1 x ... x Z/nr`` with mixed-radix indices (last factor fastest)."""
    table = [[0]]
    for n in orders:
        table = product_group_table(table, cyclic_group_table(n))
    return table


def _digits(x, orders):
    out = []
    for n in reversed(orders):
        x, r = divmod(x, n)
        out.append(r)
    return tuple(reversed(out))


def character_idempotents(field, orders, group_size=None):
    """Idempotents ``p_x = |G|^-1 sum_g psi_x(g^-1) g`` for ``psi_x(g) = prod zeta_i^(x_i g_i)``.

    Characters are labelled by group elements; columns of the returned matrix
    are the ``p_x`` in the group basis.
    """
    zetas = [root_of_unity(field, n) for n in orders]
    if any(z is None for z in zetas):
        raise ExampleError("field lacks the roots of unity for orders %s" % list(orders))
    size = 1
    for n in orders:
        size *= n
    inv = field.one / field(size) if field(size) != field.zero else None
    if inv is None:
        raise ExampleError("|G| = %d is not invertible in %s" % (size, field.name))
    cols = []
    for x in range(size):
        dx = _digits(x, orders)
        vals = []
        for g in range(size):
            dg = _digits(g, orders)
            v = field.one
            for z, a, b, n in zip(zetas, dx, dg, orders):
                v = v * z ** ((-a * b) % n)
            vals.append(v * inv)
        cols.append(field.column(vals))
    return hstack(cols, field, size)


class TwistData:
    """A twist ``J`` with supplied inverse, as ``dim x dim`` representatives in ``B (x)_k B``."""

    def __init__(self, bialgebroid, J, J_inv, name=None, notes=None):
        self.bialgebroid = bialgebroid
        self.J = J
        self.J_inv = J_inv
        self.name = name or "J"
        self.notes = notes or {}


def _prod_table(T):
    return [[T.left[i].column(j).nonzero() for j in range(T.dim)] for i in range(T.dim)]


def _tensor_mul(table, X, Y):
    """Factorwise product of tensors stored as ``{index tuple: coefficient}``."""
    out = {}
    for a, u in X.items():
        for b, v in Y.items():
            parts = [()]
            coef = [u * v]
            for i, j in zip(a, b):
                new_parts, new_coef = [], []
                for k, _, c in table[i][j]:
                    for p, q in zip(parts, coef):
                        new_parts.append(p + (k,))
                        new_coef.append(q * c)
                parts, coef = new_parts, new_coef
            for p, q in zip(parts, coef):
                out[p] = out.get(p, 0) + q
    return {k: v for k, v in out.items() if v}


def _as_dict(Z):
    return {(i, j): v for i, j, v in Z.nonzero()}


def _as_matrix(field, X, shape):
    rows, cols = shape
    if X and len(next(iter(X))) == 3:
        n = cols
        return field.from_sparse(rows, cols, {(a * n + b, c): v for (a, b, c), v in X.items()})
    return field.from_sparse(rows, cols, X)


def check_twist(TD):
    """Invertibility, commutation with eta, the cocycle condition and counit normalisation."""
    from .report import Report
    B = TD.bialgebroid
    f, d = B.field, B.dim
    T2 = B.tensor_sq
    table = _prod_table(B.total)
    J, Ji = _as_dict(TD.J), _as_dict(TD.J_inv)
    rep = Report(TD.name)
    one2 = T2.project_tensor(B.one_rep())
    JJi = T2.project_tensor(B.product_rep(TD.J, TD.J_inv))
    JiJ = T2.project_tensor(B.product_rep(TD.J_inv, TD.J))
    rep.add("twist.invertible", JJi == one2 and JiJ == one2)
    # J commutes with t(s) (x) 1 and 1 (x) s(s')
    u = B.total.unit
    bad = []
    for k in range(B.base.dim):
        for Z in (B.t.column(k) @ u.T, u @ B.s.column(k).T):
            if T2.project_tensor(B.product_rep(TD.J, Z)) != T2.project_tensor(B.product_rep(Z, TD.J)):
                bad.append(k)
    rep.add("twist.eta_commute", not bad, bad[:1] or None)
    # cocycle condition
    one = {(i,): v for i, _, v in u.nonzero()}
    J1 = {(a, b, c): v * w for (a, b), v in J.items() for (c,), w in one.items()}
    J2 = {(c, a, b): v * w for (a, b), v in J.items() for (c,), w in one.items()}
    dJ, Jd = {}, {}
    for (a, b), v in J.items():
        for x, y, w in B.delta_tensor(a).nonzero():
            dJ[(x, y, b)] = dJ.get((x, y, b), 0) + v * w
        for x, y, w in B.delta_tensor(b).nonzero():
            Jd[(a, x, y)] = Jd.get((a, x, y), 0) + v * w
    lhs = _as_matrix(f, _tensor_mul(table, J1, dJ), (d * d, d))
    rhs = _as_matrix(f, _tensor_mul(table, J2, Jd), (d * d, d))
    rep.add("twist.cocycle", B.coring.cube_project(lhs) == B.coring.cube_project(rhs))
    # counit normalisation: eps(J1) . J2 = 1 = J1 . eps(J2)  (s . b = b t(s), b . s = b s(s))
    T = B.total
    left = f.zeros(d, 1)
    right = f.zeros(d, 1)
    for (a, b), v in J.items():
        left = left + T.mult(T.basis(b), B.t @ B.epsilon.column(a)).scale(v)
        right = right + T.mult(T.basis(a), B.s @ B.epsilon.column(b)).scale(v)
    rep.add("twist.counit_left", left == u)
    rep.add("twist.counit_right", right == u)
    if "bicharacter" in TD.notes:
        rep.meta["bicharacter"] = TD.notes["bicharacter"]
    return rep


def bicharacter_ad(x, y):
    """``chi((a, b), (c, d)) = (-1)^(a d)`` on ``Z/2 x Z/2`` (index ``2a + b``)."""
    a, d = x // 2, y % 2
    return -1 if a * d else 1


def build_bicharacter_twist(field, orders, chi, ambient=None, embedding=None, name=None):
    """``J = sum chi(x, y) p_x (x) p_y`` over the character idempotents of ``A = prod Z/n_i``.

    ``chi(x, y)`` takes character labels (group indices of A).  With
    ``ambient`` (a group table containing A) and ``embedding`` (A index ->
    ambient index) the twist lives in the larger group algebra.
    """
    table = abelian_group_table(orders)
    size = len(table)
    if ambient is None:
        ambient, embedding = table, list(range(size))
    B = group_bialgebroid(field, ambient, name=name)
    idem = character_idempotents(field, orders)
    emb = field.from_sparse(B.dim, size, {(embedding[g], g): 1 for g in range(size)})
    p = emb @ idem
    vals = [[field(chi(x, y)) for y in range(size)] for x in range(size)]
    if any(v == field.zero for row in vals for v in row):
        raise ExampleError("bicharacter takes the value 0")
    J = field.zeros(B.dim, B.dim)
    Ji = field.zeros(B.dim, B.dim)
    for x in range(size):
        for y in range(size):
            outer = p.column(x) @ p.column(y).T
            J = J + outer.scale(vals[x][y])
            Ji = Ji + outer.scale(field.one / vals[x][y])
    bilinear = all(vals[table[x][y]][z] == vals[x][z] * vals[y][z] and vals[z][table[x][y]] == vals[z][x] * vals[z][y]
                   for x in range(size) for y in range(size) for z in range(size))
    return TwistData(B, J, Ji, name=name or "chi-twist", notes={"bicharacter": bilinear})


def apply_drinfeld_twist(TD, check=True):
    """``(B~, P)`` with ``Delta~ = J Delta J^-1`` and the cell ``P = B`` with ``Delta_P = J Delta``."""
    B = TD.bialgebroid
    if check:
        rep = check_twist(TD)
        if not rep.ok:
            raise ExampleError("twist fails: %s" % ", ".join(rep.failures()))
    f, d = B.field, B.dim
    tw, dp = [], []
    for b in range(d):
        Z = B.delta_tensor(b)
        JZ = B.product_rep(TD.J, Z)
        dp.append(JZ.vec())
        tw.append(B.product_rep(JZ, TD.J_inv).vec())
    delta_t = hstack(tw, f, d * d)
    Bt = Bialgebroid(B.total, B.base, B.s, B.t, delta_t, B.epsilon, name="%s~" % B.name)
    T = B.total
    P = OneCell(B, Bt, T.left, T.right, hstack(dp, f, d * d), B.epsilon, name="P_%s" % TD.name)
    return Bt, P


def inverse_twist(TD, twisted):
    """The twist ``J^-1`` on the twisted bialgebroid (undoes ``TD``)."""
    return TwistData(twisted, TD.J_inv, TD.J, name="%s^-1" % TD.name)


# base change along square-root Morita equivalences


class BaseChangeData:
    """Inverse equivalences ``P: E(R) -> E(S)``, ``Q: E(S) -> E(R)`` and a bialgebroid B over S."""

    def __init__(self, P, Q, B):
        self.P = P
        self.Q = Q
        self.B = B


def unit_isomorphism(C):
    """The coalgebroid map ``C -> E(R)`` (C an R|R-coalgebroid) that is counital and
    commutes with all four actions, solved linearly.  Returns a CoalgebroidMap or None."""
    R = C.R
    U = sweedler_unit(R)
    f = C.field
    dU, dC = U.dim, C.dim
    IU, IC = f.eye(dU), f.eye(dC)
    blocks = []
    cu, cc = U.carrier.actions(), C.carrier.actions()
    for key in sorted(cc):
        for X, Y in zip(cc[key], cu[key]):
            blocks.append(kron(IU, X.T) - kron(Y, IC))
    blocks.append(kron(U.epsilon, IC))
    lhs = vstack(blocks, f, dU * dC)
    rhs = vstack([f.zeros(b.rows, 1) for b in blocks[:-1]] + [C.epsilon.vec()], f, 1)
    x = solve(lhs, rhs)
    if x is None:
        return None
    return CoalgebroidMap(C, U, x.reshape(dU, dC), name="unit iso")


def _pure3(T_outer, T_inner, q, x, p):
    """Class of ``q . x . p`` in ``(Q . B) . P`` for columns q, x, p."""
    return T_outer.pure(T_inner.pure(q, x), p)


def sqm_base_change(D, check=True):
    """``A = Q . B . P`` over R with ``X = Q . B: B -> A`` and ``Y = B . P: A -> B``.

    Products run through the stored isomorphisms ``P . Q = E(S)`` and
    ``Q . P = E(R)``: ``(q b p)(q' b' p') = q (b s(y) t(x) b') p'`` where
    ``psi(p . q') = sum x (x) y``.
    """
    P, Q, B = D.P.coring, D.Q.coring, D.B
    f = B.field
    R, S = Q.R, B.base
    if Q.S.dim != S.dim or P.R.dim != S.dim or P.S.dim != R.dim:
        raise ExampleError("bases of P, Q, B do not line up")
    PQ, QP = compose_cgd(P, Q), compose_cgd(Q, P)
    psi, phi = unit_isomorphism(PQ), unit_isomorphism(QP)
    if psi is None or phi is None or not psi.is_invertible() or not phi.is_invertible():
        raise ExampleError("P and Q are not inverse equivalences")
    if check:
        for m in (psi, phi):
            rep = check_coalgebroid_map(m)
            if not rep.ok:
                raise ExampleError("unit isomorphism fails: %s" % ", ".join(rep.failures()))
    QB = compose_cgd(Q, B.coring)
    Acg = compose_cgd(QB, P)
    BP = compose_cgd(B.coring, P)
    T_qb, T_a, T_pq, T_bp = QB.parts[2], Acg.parts[2], PQ.parts[2], BP.parts[2]
    Bt = B.total
    dS = S.dim

    def middle(p, q):
        """``b -> b'`` factor: the element ``s(y) t(x)`` of B for ``psi(p . q) = sum x (x) y``."""
        v = psi.matrix @ T_pq.pure(f.unit_vector(P.dim, p), f.unit_vector(Q.dim, q))
        out = f.zeros(B.dim, 1)
        for k, _, c in v.nonzero():
            x, y = divmod(k, dS)
            out = out + Bt.mult(B.s.column(y), B.t.column(x)).scale(c)
        return out

    mids = {}

    def mid(p, q):
        if (p, q) not in mids:
            mids[(p, q)] = Bt.lmul(middle(p, q))
        return mids[(p, q)]

    triples = [(T_qb.basis_pairs[m][0], T_qb.basis_pairs[m][1], p) for m, p in T_a.basis_pairs]
    eq, eb, ep = (lambda i: f.unit_vector(Q.dim, i)), (lambda i: f.unit_vector(B.dim, i)), \
        (lambda i: f.unit_vector(P.dim, i))
    left = []
    for (q, b, p) in triples:
        cols = []
        for (q2, b2, p2) in triples:
            x = Bt.lmul(eb(b)) @ mid(p, q2) @ eb(b2)
            cols.append(_pure3(T_a, T_qb, eq(q), x, ep(p2)))
        left.append(hstack(cols, f, Acg.dim))
    # eta_A(r (x) r') through Q . P = E(R) and the unit of B
    phi_inv = invert(phi.matrix)
    n = R.dim
    eta_cols = []
    for k in range(n * n):
        v = phi_inv @ f.unit_vector(n * n, k)
        acc = f.zeros(Acg.dim, 1)
        for t, _, c in v.nonzero():
            q, p = QP.parts[2].basis_pairs[t]
            acc = acc + _pure3(T_a, T_qb, eq(q), Bt.unit, ep(p)).scale(c)
        eta_cols.append(acc)
    eta = hstack(eta_cols, f, Acg.dim)
    unit = eta @ kron(R.unit, R.unit)
    total = FiniteAlgebra(f, left, unit, name="Q.%s.P" % B.name)
    s = eta @ kron(R.unit, f.eye(n))
    t = eta @ kron(f.eye(n), R.unit)
    A = Bialgebroid(total, R, s, t, Acg.delta, Acg.epsilon, name=total.name)
    A.coalgebroid = Acg
    # X = Q . B: left A-action through psi, right B-action by multiplication
    xs = T_qb.basis_pairs
    X_left = []
    for (q, b, p) in triples:
        cols = [T_qb.pure(eq(q), Bt.lmul(eb(b)) @ mid(p, q2) @ eb(b2)) for (q2, b2) in xs]
        X_left.append(hstack(cols, f, QB.dim))
    X_right = [T_qb.induce_pair(f.eye(Q.dim), Rb) for Rb in Bt.right]
    X = OneCell(B, A, X_left, X_right, QB.delta, QB.epsilon, name="X")
    ys = T_bp.basis_pairs
    Y_left = [T_bp.induce_pair(L, f.eye(P.dim)) for L in Bt.left]
    Y_right = []
    for (q, b, p) in triples:
        cols = [T_bp.pure(Bt.lmul(eb(b1)) @ mid(p1, q) @ eb(b), ep(p)) for (b1, p1) in ys]
        Y_right.append(hstack(cols, f, BP.dim))
    Y = OneCell(A, B, Y_left, Y_right, BP.delta, BP.epsilon, name="Y")
    return A, X, Y
