import random

import pytest

from monmorita.algkit import (
    cyclic_group_table, diagonal_algebra, ground_algebra, matrix_algebra, truncated_polynomial_algebra,
)
from monmorita.bgdkit import (
    check_bialgebroid, check_bialgebroid_map, eta_map, module_tensor, regular_module, sweedler_bialgebroid,
    trivial_module,
)
from monmorita.cgdkit import pair_apply
from monmorita.examples import build_azumaya_cell, build_blowup, build_inverse_azumaya_cell, group_bialgebroid
from monmorita.exactfield import QQ, Field, hstack, invert, kron
from monmorita.modkit import hom_modules, progenerator_report
from monmorita.moritakit import (
    CellError, FrobeniusData, OneCell, TwoCell, antipode, check_one_cell, check_two_cell, compose_bgd,
    endomorphism_bialgebroid, frobenius_check, hom_adjunction_dims, hp_apply, hp_monoidal_maps,
    identity_two_cell, lambda_map, morita_verdict, pullback_cell, regular_cell, strongness_check,
)

QZ2 = group_bialgebroid(QQ, cyclic_group_table(2))
KB = group_bialgebroid(QQ, cyclic_group_table(1))


@pytest.fixture(scope="module")
def blowup():
    return build_blowup(QZ2, 2)


@pytest.fixture(scope="module")
def azumaya():
    return build_azumaya_cell(matrix_algebra(QQ, 2))


def broken_blowup(P):
    items = {(r, c): v for r, c, v in P.delta.nonzero() if c < 2}
    return OneCell(P.source, P.target, P.left_act, P.right_act, QQ.from_sparse(16, 4, items), P.epsilon,
                   name="broken")


def suite_cells(blowup):
    A, P = blowup
    return [regular_cell(QZ2), regular_cell(sweedler_bialgebroid(diagonal_algebra(QQ, 2))), P,
            build_blowup(KB, 3)[1]]


# one-cells and two-cells


def test_regular_and_blowup_cells_pass(blowup):
    A, P = blowup
    for C in (regular_cell(A), regular_cell(QZ2), P):
        rep = check_one_cell(C)
        assert rep.ok, rep.failures()
    for key in ("cell.delta_in_centralizer", "cell.delta_A_compatible", "cell.epsilon_A_compatible",
                "cell.comonoid.delta_B_linear", "cell.comonoid.epsilon_B_linear"):
        assert key in rep.items


def test_blowup_over_gf7():
    B = group_bialgebroid(Field(7), cyclic_group_table(3))
    A, P = build_blowup(B, 2)
    assert check_bialgebroid(A).ok and check_one_cell(P).ok


def test_broken_comultiplication_fails_counit(blowup):
    rep = check_one_cell(broken_blowup(blowup[1]))
    assert not rep.passed("cell.comonoid.counit_left")


def test_two_cells(blowup):
    P = blowup[1]
    assert check_two_cell(identity_two_cell(P)).ok
    zero = check_two_cell(TwoCell(P, P, QQ.zeros(P.dim, P.dim)))
    assert zero.failures() == ["2cell.counital"]


def test_pullback_cells(blowup):
    A, _ = blowup
    Q = pullback_cell(eta_map(A))
    assert check_one_cell(Q).ok
    from monmorita.bgdkit import BialgebroidError, BialgebroidMap
    bad = BialgebroidMap(QZ2, QZ2, QQ.zeros(2, 2), f0=QQ.eye(1))
    with pytest.raises(BialgebroidError):
        pullback_cell(bad)


# the hom-functor


def test_hp_regular_cell_is_identity():
    P = regular_cell(QZ2)
    M = regular_module(QZ2)
    H = hp_apply(P, M)
    assert H.dim == M.dim
    # mu -> mu(1) intertwines the actions
    ev = QQ.from_entries(H.dim, M.dim, [x for h in H.hom.basis for x in (h @ QZ2.total.unit).entries()]).T
    assert all(ev @ a == b @ ev for a, b in zip(H.right_act, M.right_act))
    assert invert(ev) is not None


def test_hp_blowup_dimension(blowup):
    _, P = blowup
    for M in (regular_module(QZ2), trivial_module(QZ2)):
        assert hp_apply(P, M).dim == 2 * M.dim


def test_hp_pullback_eta_is_forgetful(blowup):
    A, _ = blowup
    Q = pullback_cell(eta_map(A))       # A-module side: Hom_A(A, M) as an E(R)-module
    eta = A.eta()
    for M in (trivial_module(A), regular_module(A)):
        H = hp_apply(Q, M)
        assert H.dim == M.dim
        # mu -> mu(1) identifies the action with the restriction along eta
        one = A.total.unit
        ev = QQ.from_entries(H.dim, M.dim, [x for h in H.hom.basis for x in (h @ one).entries()]).T
        restricted = [M.ract(eta.column(x)) for x in range(eta.cols)]
        assert invert(ev) is not None
        assert all(ev @ a == b @ ev for a, b in zip(H.right_act, restricted))


def test_monoidal_maps_invertible(blowup, azumaya):
    for P in (regular_cell(QZ2), blowup[1]):
        mm = hp_monoidal_maps(P, regular_module(QZ2), regular_module(QZ2))
        assert mm.invertible() == (True, True)
    E = azumaya.source
    mm = hp_monoidal_maps(azumaya, trivial_module(E), trivial_module(E))
    assert mm.map0.shape == (1, 1) and mm.invertible() == (True, True)


def test_map2_naturality(blowup):
    """map2 o (Ha(f) (x) Ha(f)) == Ha(f (x) f) o map2 for the module map f = left mult by g."""
    _, P = blowup
    M = regular_module(QZ2)
    f = QZ2.total.left[1]
    mm = hp_monoidal_maps(P, M, M)
    HM = hp_apply(P, M).hom
    Hf = HM.coords_many(hstack([(f @ h).vec() for h in HM.basis], QQ, HM.dim_p * HM.dim_m))
    dom = mm.tensor_dom.induce_pair(Hf, Hf)
    ff = mm.tensor_mn.induce_pair(f, f)
    HC = mm.codomain2.hom
    cod = HC.coords_many(hstack([(ff @ h).vec() for h in HC.basis], QQ, HC.dim_p * HC.dim_m))
    assert mm.map2 @ dom == cod @ mm.map2


def test_local_faithfulness(blowup):
    """Ha(alpha) applied to id_Q recovers alpha; nonzero 2-cells give nonzero images."""
    _, P = blowup
    alpha = identity_two_cell(P)
    Q = alpha.target
    H = hp_apply(P, Q.right_module()).hom
    c = H.coords(alpha.matrix)
    assert c is not None and not c.is_zero()


# strongness, endomorphism bialgebroids, lambda


def test_strongness_blowup_variant2_is_32(blowup):
    rep = strongness_check(blowup[1])
    assert rep.ok and rep.meta["route"] == "variant1+variant2"
    assert rep.items["strong.variant2"]["witness"]["shape"] == [32, 32]
    assert rep.items["strong.variant2"]["witness"]["rank"] == 32


def test_strongness_azumaya(azumaya):
    rep = strongness_check(azumaya)
    assert rep.ok
    assert rep.items["strong.variant2"]["witness"]["shape"] == [1, 1]


def test_strongness_agrees_with_direct_maps(blowup):
    for P in suite_cells(blowup):
        rep = strongness_check(P)
        mm = hp_monoidal_maps(P, regular_module(P.source), regular_module(P.source))
        assert rep.ok == all(mm.invertible())


def test_strongness_fallback_route():
    # R = Diag2 is separable but R is not a generator over R^e
    P = build_azumaya_cell(diagonal_algebra(QQ, 2))
    rep = strongness_check(P)
    assert "generator_pair" in rep.meta["route"]
    assert not rep.passed("strong.direct_map0")


def test_endomorphism_bialgebroids(blowup, azumaya):
    for P in suite_cells(blowup) + [azumaya]:
        endo = endomorphism_bialgebroid(P)
        assert check_bialgebroid(endo.bialgebroid).ok, P.name
        assert check_one_cell(endo.cell).ok, P.name
    endo = endomorphism_bialgebroid(blowup[1])
    assert endo.E.dim == 8 and endo.T.dim == 2 and endo.T.is_commutative()
    endo = endomorphism_bialgebroid(azumaya)
    assert endo.E.dim == 1 and endo.T.dim == 1


def test_lambda_maps(blowup):
    for P in (regular_cell(QZ2), blowup[1]):
        lam = lambda_map(P, endomorphism_bialgebroid(P))
        rep = check_bialgebroid_map(lam)
        assert rep.ok and rep.meta["isomorphism"]


def test_lambda_not_injective_flagged():
    # k with the trivial k[Z2]-action: a valid cell whose lambda kills g - 1
    P = OneCell(KB, QZ2, [QQ.eye(1)] * 2, [QQ.eye(1)], QQ.eye(1), QQ.eye(1), name="triv")
    assert check_one_cell(P).ok
    lam = lambda_map(P, endomorphism_bialgebroid(P))
    assert not check_bialgebroid_map(lam).meta["isomorphism"]
    rep = morita_verdict(P)
    assert not rep.ok and rep.meta["first_failure"] == "lambda.isomorphism"


# composition


def test_compose_with_regular(blowup):
    _, P = blowup
    C = compose_bgd(P, regular_cell(QZ2))
    assert C.dim == P.dim and check_one_cell(C).ok
    R = compose_bgd(regular_cell(QZ2), regular_cell(QZ2))
    assert R.dim == 2 and check_one_cell(R).ok


def test_azumaya_composed_with_inverse(azumaya):
    Q = build_inverse_azumaya_cell(matrix_algebra(QQ, 2))
    assert check_one_cell(Q).ok
    PQ = compose_bgd(azumaya, Q)
    assert PQ.dim == 1 and check_one_cell(PQ).ok
    assert morita_verdict(PQ).ok


def test_hom_adjunction(blowup):
    _, P = blowup
    for M in (regular_module(QZ2), trivial_module(QZ2)):
        lhs, rhs = hom_adjunction_dims(P, regular_cell(QZ2), M)
        assert lhs == rhs


# Morita verdicts


def test_verdicts(blowup, azumaya):
    rep = morita_verdict(regular_cell(QZ2))
    assert rep.ok and rep.meta["equivalent"]
    rep = morita_verdict(blowup[1])
    assert rep.ok
    cert = rep.meta["certificate"]
    assert cert["dims"] == {"A": 8, "B": 2, "P": 4, "E": 8, "T": 2}
    assert cert["lambda"] @ cert["lambda_inverse"] == QQ.eye(8)
    assert morita_verdict(azumaya).ok


def test_certificate_reverifies(blowup):
    """The dual basis witness alone re-proves projectivity with plain arithmetic."""
    _, P = blowup
    cert = morita_verdict(P).meta["certificate"]
    H, x = cert["dual_basis"]["hom_basis"], cert["dual_basis"]["coefficients"]
    d = P.dim
    total = QQ.zeros(d, d)
    for i in range(d):
        for c in range(x.cols):
            h = H.column(c).reshape(QZ2.dim, d)
            Ri = hstack([Rb.column(i) for Rb in P.right_act], QQ, d)
            total = total + (Ri @ h).scale(x[i, c])
    assert total == QQ.eye(d)


def test_verdict_negative_controls(blowup):
    rep = morita_verdict(build_azumaya_cell(truncated_polynomial_algebra(QQ, 2)))
    assert not rep.ok and rep.meta["first_failure"] == "progen.projective"
    assert rep.meta["stages"] == ["cell", "progenerator"]
    broken = broken_blowup(blowup[1])
    rep = morita_verdict(broken)
    assert not rep.ok and rep.meta["first_failure"].startswith("cell.")
    rep = morita_verdict(broken, check_cell=False)
    assert not rep.ok and rep.meta["first_failure"].startswith("strong.")


def test_report_is_deterministic(blowup):
    a = morita_verdict(blowup[1]).to_json()
    b = morita_verdict(blowup[1]).to_json()
    assert a == b


# Frobenius structures and the antipode


def pointwise(n):
    A, P = build_blowup(KB, n)
    nu = QQ.from_sparse(n, n * n, {(i, i * n + i): 1 for i in range(n)})
    return P, FrobeniusData(nu, QQ.column([1] * n))


def test_frobenius_pointwise():
    P, F = pointwise(3)
    rep = frobenius_check(P, F)
    assert rep.ok
    assert rep.meta["ev"] == QQ.eye(3).vec().T
    bad = frobenius_check(P, FrobeniusData(F.nu, QQ.zeros(3, 1)))
    assert not bad.passed("frob.evaluation")


def test_frobenius_group_algebra():
    P = regular_cell(QZ2)
    nu = QQ.from_sparse(2, 4, {(0, 0): 1, (1, 3): 1})
    rep = frobenius_check(P, FrobeniusData(nu, QQ.column([1, 1])))
    assert rep.ok


def test_antipode_is_transpose():
    P, F = pointwise(3)
    endo = endomorphism_bialgebroid(P)
    S, rep = antipode(P, F, endo)
    assert rep.ok, rep.failures()
    H = endo.hom_E
    for i in range(H.dim):
        assert H.element(S.column(i)) == H.basis[i].T
    lam1 = lambda_map(P, endo).matrix @ P.target.total.unit
    assert S @ lam1 == lam1


def test_antipode_trivial():
    P, F = pointwise(1)
    S, rep = antipode(P, F)
    assert rep.ok and S == QQ.eye(1)


def test_antipode_antimultiplicative_random():
    P, F = pointwise(3)
    endo = endomorphism_bialgebroid(P)
    S, _ = antipode(P, F, endo)
    E = endo.E
    rng = random.Random(11)
    for _ in range(20):
        a = QQ.column([rng.randint(-4, 4) for _ in range(E.dim)])
        b = QQ.column([rng.randint(-4, 4) for _ in range(E.dim)])
        assert S @ E.mult(a, b) == E.mult(S @ b, S @ a)
