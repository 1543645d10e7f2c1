"""
Bimodules by action matrices, tensor products over a ring as explicit
quotients, Hom spaces of module maps, and progenerator certificates.

Conventions: ``left_act[i]`` is the matrix of ``x -> e_i |> x``,
``right_act[j]`` the matrix of ``x -> x <| e_j``.  Elements of a tensor
product ``M (x)_k N`` are vectors indexed ``m * dim N + n``; equivalently
``dim M x dim N`` matrices.
"""

import random

from .algkit import ground_algebra
from .exactfield import (
    hstack, invert, kernel_basis, kron, rref, solve, vstack,
)
from .report import Report


class ModuleError(ValueError):
    pass


class IllDefinedError(ModuleError):
    """Structure induced on a quotient does not respect the relations."""


def combination(mats, coeffs, field, shape):
    """``sum_k coeffs[k] * mats[k]`` for a column ``coeffs``."""
    out = field.zeros(*shape)
    for k, _, c in coeffs.nonzero():
        out = out + mats[k].scale(c)
    return out


class Bimodule:

    def __init__(self, left_alg, right_alg, left_act, right_act, name=None):
        left_act, right_act = list(left_act), list(right_act)
        if len(left_act) != left_alg.dim or len(right_act) != right_alg.dim:
            raise ModuleError("number of action matrices does not match algebra dimensions")
        mats = left_act + right_act
        dim = mats[0].rows if mats else 0
        for m in mats:
            if m.shape != (dim, dim):
                raise ModuleError("action matrices must all be %dx%d" % (dim, dim))
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.left_act = left_act
        self.right_act = right_act
        self.dim = dim
        self.field = left_alg.field
        self.name = name

    def __repr__(self):
        return "Bimodule(%s, %s|%s, dim=%d)" % (self.name, self.left_alg.name, self.right_alg.name, self.dim)

    def lact(self, a):
        """Matrix of ``x -> a |> x`` for an element ``a`` (column)."""
        return combination(self.left_act, a, self.field, (self.dim, self.dim))

    def ract(self, b):
        return combination(self.right_act, b, self.field, (self.dim, self.dim))


def right_module(B, right_act, name=None):
    """A right B-module, viewed as a k-B-bimodule."""
    k = ground_algebra(B.field)
    dim = right_act[0].rows
    return Bimodule(k, B, [B.field.eye(dim)], right_act, name)


def regular_bimodule(A, name=None):
    return Bimodule(A, A, A.left, A.right, name or A.name)


def free_right_module(B, n, name=None):
    """B^n with componentwise right action; basis index ``i * dim B + b``."""
    f = B.field
    return right_module(B, [kron(f.eye(n), R) for R in B.right], name or "%s^%d" % (B.name, n))


def _action_law(acts, alg, anti):
    """First basis pair (i, j) violating L(e_i e_j) = L_i L_j (or R_j R_i), else None."""
    field = alg.field
    d = acts[0].rows if acts else 0
    n = alg.dim
    V = hstack([a.vec() for a in acts], field, d * d)
    for i in range(n):
        combos = V @ alg.left[i]
        for j in range(n):
            lhs = combos.column(j).reshape(d, d)
            rhs = acts[j] @ acts[i] if anti else acts[i] @ acts[j]
            if lhs != rhs:
                return [i, j]
    return None


def _unit_acts(acts, alg):
    d = acts[0].rows if acts else 0
    return combination(acts, alg.unit, alg.field, (d, d)) == alg.field.eye(d)


def _commuting(first, second):
    for i, a in enumerate(first):
        for j, b in enumerate(second):
            if a @ b != b @ a:
                return [i, j]
    return None


def check_bimodule(M, prefix="bimod."):
    rep = Report(M.name or "bimodule")
    bad = _action_law(M.left_act, M.left_alg, anti=False)
    rep.add(prefix + "left_multiplicative", bad is None, bad)
    rep.add(prefix + "left_unital", _unit_acts(M.left_act, M.left_alg))
    bad = _action_law(M.right_act, M.right_alg, anti=True)
    rep.add(prefix + "right_antimultiplicative", bad is None, bad)
    rep.add(prefix + "right_unital", _unit_acts(M.right_act, M.right_alg))
    bad = _commuting(M.left_act, M.right_act)
    rep.add(prefix + "actions_commute", bad is None, bad)
    return rep


class Multimodule:
    """Four commuting actions: lower (base R) and upper (base S), each on both sides.

    ``lower_left[r]``: x -> r.x, ``lower_right[r]``: x -> x.r,
    ``upper_left[s]``: x -> s.x (upper dot), ``upper_right[s]``: x -> x.s.
    """

    def __init__(self, R, S, lower_left, lower_right, upper_left, upper_right, name=None):
        self.R = R
        self.S = S
        self.lower_left = list(lower_left)
        self.lower_right = list(lower_right)
        self.upper_left = list(upper_left)
        self.upper_right = list(upper_right)
        self.dim = (self.lower_left or self.upper_left)[0].rows
        self.field = R.field
        self.name = name
        for acts, alg in ((self.lower_left, R), (self.lower_right, R), (self.upper_left, S), (self.upper_right, S)):
            if len(acts) != alg.dim or any(a.shape != (self.dim, self.dim) for a in acts):
                raise ModuleError("multimodule action shapes do not match")

    def as_bimodule(self):
        """The underlying (R (x) S)-(R (x) S)-bimodule."""
        from .algkit import tensor_algebras
        RS = tensor_algebras(self.R, self.S)
        left = [l @ u for l in self.lower_left for u in self.upper_left]
        right = [l @ u for l in self.lower_right for u in self.upper_right]
        return Bimodule(RS, RS, left, right, self.name)

    def actions(self):
        return {"lower_left": self.lower_left, "lower_right": self.lower_right,
                "upper_left": self.upper_left, "upper_right": self.upper_right}


def check_multimodule(M, prefix="mm."):
    rep = Report(M.name or "multimodule")
    acts = M.actions()
    algs = {"lower_left": (M.R, False), "lower_right": (M.R, True),
            "upper_left": (M.S, False), "upper_right": (M.S, True)}
    for key, mats in acts.items():
        alg, anti = algs[key]
        bad = _action_law(mats, alg, anti)
        rep.add(prefix + key + "_law", bad is None, bad)
        rep.add(prefix + key + "_unital", _unit_acts(mats, alg))
    keys = sorted(acts)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            bad = _commuting(acts[keys[a]], acts[keys[b]])
            rep.add(prefix + "commute.%s.%s" % (keys[a], keys[b]), bad is None, bad)
    return rep


# quotients


class QuotientPresentation:
    """A quotient ``V / W`` with projection ``V -> V/W`` and a section.

    ``projection @ section`` is the identity on the quotient and the
    kernel of ``projection`` is the relation span ``W``.
    """

    def __init__(self, field, ambient_dim, projection, section):
        self.field = field
        self.ambient_dim = ambient_dim
        self._projection = projection
        self._section = section
        self.dim = section.cols

    @property
    def quotient_dim(self):
        return self.dim

    @property
    def projection(self):
        return self._projection

    @property
    def section(self):
        return self._section

    def project_tensors(self, Zs):
        """Batched ``project_tensor``: one quotient column per ``dim_m x dim_n`` matrix."""
        Zs = list(Zs)
        if not Zs:
            return self.field.zeros(self.dim, 0)
        k, b = len(Zs), self.b
        Y = None
        for a in range(self.dim_s):
            st = self.sigma_by_elem[a].T
            t = self.m_right[a] @ hstack([Z @ st for Z in Zs], self.field, self.dim_m)
            Y = t if Y is None else Y + t
        # column block i of Y is the dim_m x b matrix of the i-th tensor
        e, w = Y.entries(), k * b
        flat = [e[m * w + i * b + beta] for m in range(self.dim_m) for beta in range(b) for i in range(k)]
        return self.reduce @ self.field.from_entries(self.dim_m * b, k, flat)

    def project(self, v):
        return self.projection @ v

    def lift(self, x):
        return self.section @ x

    def relations(self):
        """Basis of the relation span (kernel of the projection)."""
        return kernel_basis(self.projection)

    def induce(self, F, target=None, check=True):
        """The map induced on quotients by an ambient map ``F``.

        Raises :class:`IllDefinedError` if ``F`` does not carry relations
        into the relations of ``target``.
        """
        target = self if target is None else target
        out = target.project(F @ self.section)
        if check:
            W = self.relations()
            if W.cols and not target.project(F @ W).is_zero():
                raise IllDefinedError("map does not preserve the relation span")
        return out


def _reduction(field, rel_rows, n):
    """Projection onto non-pivot coordinates modulo the row span of ``rel_rows``."""
    if rel_rows.rows == 0:
        return field.eye(n), list(range(n))
    R, pivots, r = rref(rel_rows)
    ps = set(pivots)
    free = [j for j in range(n) if j not in ps]
    items = {}
    e = R.entries()
    for t, j in enumerate(free):
        items[(t, j)] = 1
        for i, p in enumerate(pivots):
            v = e[i * n + j]
            if v != 0:
                items[(t, p)] = -v
    return field.from_sparse(len(free), n, items), free


def relation_quotient(field, ambient_dim, relations):
    """Quotient by the column span of ``relations``; section at non-pivot coordinates."""
    red, free = _reduction(field, relations.T, ambient_dim)
    section = field.from_sparse(ambient_dim, len(free), {(j, t): 1 for t, j in enumerate(free)})
    return QuotientPresentation(field, ambient_dim, red, section)


class TensorProduct(QuotientPresentation):
    """``M (x)_S N`` for right S-action matrices on M and left ones on N.

    The quotient is computed from a presentation of N as a left S-module:
    generators ``g_1..g_b`` (basis vectors of N, chosen greedily), a linear
    section ``sigma: N -> S^b`` with ``sigma(g_beta) = 1`` in slot beta, and
    the syzygies ``K`` of the generators.  Then ``M (x)_S N`` is
    ``M^b / {(m <| k_beta)_beta : k in K}``, and ``m (x) n`` maps to
    ``(m <| sigma(n)_beta)_beta``.  Quotient basis vectors are represented
    by the pure tensors ``m (x) g_beta`` at the non-pivot coordinates.
    """

    def __init__(self, field, m_right, n_left, dim_m=None, dim_n=None, name=None, generators="basis"):
        self.generator_mode = generators
        self.m_right = list(m_right)
        self.n_left = list(n_left)
        if len(self.m_right) != len(self.n_left):
            raise ModuleError("balancing algebra dimensions disagree")
        dS = len(self.m_right)
        dM = self.m_right[0].rows if dS else dim_m
        dN = self.n_left[0].rows if dS else dim_n
        self.dim_m, self.dim_n, self.dim_s = dM, dN, dS
        self.name = name
        self._presentation(field)
        self.field = field
        self.ambient_dim = dM * dN
        self._projection = None
        self._section = None

    def _presentation(self, field):
        dM, dN, dS = self.dim_m, self.dim_n, self.dim_s
        # greedy generators of N as a left S-module
        gens = []
        span = field.zeros(dN, 0)
        rng = random.Random(0)
        for j in range(dN):
            if span.cols == dN:
                break
            cands = [field.unit_vector(dN, j)]
            if self.generator_mode == "generic":
                # a random combination generates a maximal cyclic submodule generically
                cands.insert(0, field.from_entries(dN, 1, [rng.randint(-3, 3) for _ in range(dN)]))
            cands = [g for g in cands if not g.is_zero() and (not span.cols or solve(span, g) is None)]
            if not cands:
                continue
            g = cands[0]
            gens.append(g if self.generator_mode == "generic" else j)
            block = [g] + [a @ g for a in self.n_left]
            span = hstack([span] + block)
            span = span.submatrix(range(dN), rref(span)[1])
        if span.cols < dN:
            raise ModuleError("generators do not span N")
        self.gen_vectors = [g if self.generator_mode == "generic" else field.unit_vector(dN, g) for g in gens]
        b = len(gens)
        self.generators = gens
        self.b = b
        if dS == 0:
            raise ModuleError("balancing algebra has dimension 0")
        # phi: S^b -> N, coordinates (beta, a) at beta * dS + a
        phi_cols = []
        for ej in self.gen_vectors:
            phi_cols.extend(a @ ej for a in self.n_left)
        phi = hstack(phi_cols, field, dN)
        self.phi = phi
        # candidate spanning vectors: g_beta itself first (preimage = unit in slot beta)
        unit = self._unit_coords(field)
        cand_vecs, cand_pre = [], []
        for beta, g in enumerate(self.gen_vectors):
            pre = hstack([field.zeros(beta * dS, 1).T, unit.T, field.zeros((b - beta - 1) * dS, 1).T]).T
            cand_vecs.append(g)
            cand_pre.append(pre)
            for a in range(dS):
                cand_vecs.append(phi.column(beta * dS + a))
                cand_pre.append(field.unit_vector(b * dS, beta * dS + a))
        V = hstack(cand_vecs, field, dN)
        _, piv, r = rref(V)
        if r != dN:
            raise ModuleError("generators do not span N")
        Bsel = V.submatrix(range(dN), piv)
        Ssel = hstack([cand_pre[i] for i in piv], field, b * dS)
        self.sigma = Ssel @ invert(Bsel)              # (b*dS) x dN
        self.syzygies = kernel_basis(phi)             # (b*dS) x c
        # sigma_a[beta, n] = sigma[(beta, a), n]
        se = self.sigma.entries()
        self.sigma_by_elem = [field.from_entries(b, dN, [se[(beta * dS + a) * dN + n]
                                                         for beta in range(b) for n in range(dN)])
                              for a in range(dS)]
        # relations in M^b, coordinates (m, beta) at m * b + beta
        # relation for syzygy k, as a row block indexed by m: entries (m', beta) = (m <| k_beta)[m']
        K = self.syzygies
        A = hstack([a.T.vec() for a in self.m_right], field, dM * dM)     # [(m, m'), a]
        rel_rows = [(A @ K.column(c).reshape(b, dS).T).reshape(dM, dM * b) for c in range(K.cols)]
        rel_rows = vstack(rel_rows, field, dM * b) if rel_rows else field.zeros(0, dM * b)
        self.reduce, free = _reduction(field, rel_rows, dM * b)
        self.free_coords = free
        self.dim = len(free)
        # quotient basis vector t <-> pure tensor m (x) g_beta
        self.basis_gens = [(c // b, c % b) for c in free]
        self.basis_pairs = None if self.generator_mode == "generic" else [(m, gens[beta]) for m, beta in self.basis_gens]

    def _unit_coords(self, field):
        """Coordinates of 1_S: the unique u with sum_a u_a n_left[a] = id."""
        dS, dN = self.dim_s, self.dim_n
        V = hstack([a.vec() for a in self.n_left], field, dN * dN)
        u = solve(V, field.eye(dN).vec())
        if u is None:
            raise ModuleError("left action is not unital")
        return u

    @property
    def section(self):
        if self._section is None:
            dN = self.dim_n
            if self.basis_pairs is not None:
                items = {(m * dN + n, t): 1 for t, (m, n) in enumerate(self.basis_pairs)}
                self._section = self.field.from_sparse(self.ambient_dim, self.dim, items)
            else:
                cols = [kron(self.field.unit_vector(self.dim_m, m), self.gen_vectors[beta])
                        for m, beta in self.basis_gens]
                self._section = hstack(cols, self.field, self.ambient_dim)
        return self._section

    @property
    def projection(self):
        if self._projection is None:
            pre = None
            for a in range(self.dim_s):
                term = kron(self.m_right[a], self.sigma_by_elem[a])
                pre = term if pre is None else pre + term
            self._projection = self.reduce @ pre
        return self._projection

    def project_tensor(self, Z):
        """Project an ambient element given as a ``dim_m x dim_n`` matrix."""
        Y = None
        for a in range(self.dim_s):
            t = self.m_right[a] @ (Z @ self.sigma_by_elem[a].T)
            Y = t if Y is None else Y + t
        return self.reduce @ Y.vec()

    def project(self, v):
        if self._projection is not None or self.ambient_dim <= 4096:
            return self.projection @ v
        cols = [self.project_tensor(v.column(j).reshape(self.dim_m, self.dim_n)) for j in range(v.cols)]
        return hstack(cols, self.field, self.dim)

    def pure(self, m, n):
        """Class of ``m (x) n`` for columns m, n."""
        return self.project_tensor(m @ n.T)

    def induce_pair(self, X, Y, target=None):
        """Class map of ``x (x) y -> X x (x) Y y``; X must commute with the
        balancing action on M and Y with the one on N."""
        target = self if target is None else target
        if self.basis_pairs is None:
            raise ModuleError("induce_pair needs basis-vector generators")
        if isinstance(target, TensorProduct):
            for a in range(self.dim_s):
                if X @ self.m_right[a] != target.m_right[a] @ X:
                    raise IllDefinedError("left factor map is not balanced-linear")
                if Y @ self.n_left[a] != target.n_left[a] @ Y:
                    raise IllDefinedError("right factor map is not balanced-linear")
        return target.project_tensors(X.column(m) @ Y.column(n).T for m, n in self.basis_pairs)


def tensor_over_ring(M, N, name=None):
    """``M (x)_B N`` for bimodules ``_A M_B`` and ``_B N_C``, with outer actions.

    Returns ``(TensorProduct, Bimodule over (A, C))``.
    """
    if M.right_alg.dim != N.left_alg.dim or M.field != N.field:
        raise ModuleError("balancing algebras do not match")
    T = TensorProduct(M.field, M.right_act, N.left_act, M.dim, N.dim, name=name)
    f = M.field
    In, Im = f.eye(N.dim), f.eye(M.dim)
    left = [T.induce_pair(a, In) for a in M.left_act]
    right = [T.induce_pair(Im, c) for c in N.right_act]
    return T, Bimodule(M.left_alg, N.right_alg, left, right, name)


# Hom spaces


class HomSpace:
    """A basis of linear maps ``P -> M`` (as ``dim M x dim P`` matrices)."""

    def __init__(self, field, dim_p, dim_m, basis_vecs):
        self.field = field
        self.dim_p = dim_p
        self.dim_m = dim_m
        self.vecs = basis_vecs               # (dim_m * dim_p) x h
        self.dim = basis_vecs.cols
        self.basis = [basis_vecs.column(i).reshape(dim_m, dim_p) for i in range(self.dim)]
        if self.dim:
            _, rows, _ = rref(basis_vecs.T)
            self._rows = rows
            self._inv = invert(basis_vecs.submatrix(rows, range(self.dim)))
        else:
            self._rows, self._inv = [], None

    def __len__(self):
        return self.dim

    def element(self, coords):
        return combination(self.basis, coords, self.field, (self.dim_m, self.dim_p))

    def coords(self, f, check=True):
        """Coordinates of the map ``f`` (matrix) in this basis; ``None`` if outside."""
        v = f.vec()
        if self.dim == 0:
            return self.field.zeros(0, 1) if (not check or v.is_zero()) else None
        x = self._inv @ v.submatrix(self._rows, [0])
        if check and self.vecs @ x != v:
            return None
        return x

    def coords_many(self, vecs):
        """Coordinates for several maps given as vectorised columns (assumed inside)."""
        if self.dim == 0:
            return self.field.zeros(0, vecs.cols)
        return self._inv @ vecs.submatrix(self._rows, range(vecs.cols))


def hom_modules(P_right, M_right, field=None, dim_p=None, dim_m=None):
    """Right-module maps ``P -> M`` given the right action matrices of a common algebra.

    ``f`` is linear iff ``f R^P_b = R^M_b f`` for all basis b.
    """
    P_right, M_right = list(P_right), list(M_right)
    if len(P_right) != len(M_right):
        raise ModuleError("right algebras differ")
    field = field or (P_right or M_right)[0].field
    dP = P_right[0].rows if P_right else dim_p
    dM = M_right[0].rows if M_right else dim_m
    if not P_right:
        return HomSpace(field, dP, dM, field.eye(dP * dM))
    # row-major vec: vec(f R) = kron(I, R^T) vec f, vec(R f) = kron(R, I) vec f
    IP, IM = field.eye(dP), field.eye(dM)
    blocks = [kron(IM, Rp.T) - kron(Rm, IP) for Rp, Rm in zip(P_right, M_right)]
    return HomSpace(field, dP, dM, kernel_basis(vstack(blocks)))


def hom_bimodules(P, M):
    """``Hom_B(P, M)`` for modules sharing the right algebra B."""
    if P.right_alg.dim != M.right_alg.dim:
        raise ModuleError("mismatched right algebras")
    return hom_modules(P.right_act, M.right_act, P.field, P.dim, M.dim)


def centralizer(left_ops, right_ops):
    """Basis (columns) of ``{x : L_r x = R_r x for all r}``."""
    left_ops, right_ops = list(left_ops), list(right_ops)
    field = left_ops[0].field
    d = left_ops[0].rows
    return kernel_basis(vstack([l - r for l, r in zip(left_ops, right_ops)], field, d))


def multimodule_centralizer(M, which="lower"):
    """``{x : r.x = x.r}`` for the lower (or upper) pair of actions."""
    if which == "lower":
        return centralizer(M.lower_left, M.lower_right)
    return centralizer(M.upper_left, M.upper_right)


# progenerators


def dual_basis(P):
    """Solve ``sum_i p_i <| f_i(p) = p`` with ``p_i`` the basis of P and
    ``f_i`` in ``Hom_B(P, B)``.  Returns ``(hom_space, coefficient matrix)`` or
    ``(hom_space, None)``."""
    B = P.right_alg
    f = P.field
    H = hom_modules(P.right_act, B.right, f, P.dim, B.dim)
    d = P.dim
    if H.dim == 0:
        return H, None
    # unknown x[i, c]: f_i = sum_c x[i,c] H.basis[c]
    # map p -> p_i <| h_c(p) has matrix sum_b right_act[b][:, i] h_c[b, :]
    cols = []
    for i in range(d):
        Ri = hstack([Rb.column(i) for Rb in P.right_act], f, d)    # d x dimB
        for h in H.basis:
            cols.append((Ri @ h).vec())
    G = hstack(cols, f, d * d)
    x = solve(G, f.eye(d).vec())
    if x is None:
        return H, None
    return H, x.reshape(d, H.dim)


def progenerator_report(P, name=None):
    """Finite generation, projectivity, generator property and faithful balance of ``_A P_B``."""
    rep = Report(name or P.name or "P")
    A, B, f = P.left_alg, P.right_alg, P.field
    rep.add("progen.fin_gen", True, {"dim": P.dim})
    H, x = dual_basis(P)
    witness = None
    if x is not None:
        witness = {"generators": "standard basis of P", "coefficients": x}
    rep.add("progen.projective", x is not None, witness)
    # trace ideal: span of all f(p)
    if H.dim:
        T = hstack(H.basis, f, B.dim)
        gen = T.rank() == B.dim
        one = solve(T, B.unit) if gen else None
    else:
        gen, one = False, None
    rep.add("progen.generator", gen, {"trace_ideal_dim": T.rank() if H.dim else 0, "unit_preimage": one})
    # faithful balance: A -> End_B(P) onto, and B -> End_A(P) onto
    E = hom_modules(P.right_act, P.right_act, f, P.dim, P.dim)
    img_a = hstack([a.vec() for a in P.left_act], f, P.dim * P.dim).rank() if A.dim else 0
    F = hom_modules([a.T for a in P.left_act], [a.T for a in P.left_act], f, P.dim, P.dim)
    img_b = hstack([b.vec() for b in P.right_act], f, P.dim * P.dim).rank() if B.dim else 0
    bal = img_a == E.dim and img_b == F.dim
    rep.add("progen.faithfully_balanced", bal,
            {"dim_End_B": E.dim, "rank_A_image": img_a, "dim_End_A": F.dim, "rank_B_image": img_b})
    return rep
