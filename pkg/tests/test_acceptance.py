"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) to get just the ten lines.
"""

import os
import random
import subprocess
import sys
import time

import pytest

from monmorita.algkit import (
    cyclic_group_table, diagonal_algebra, ground_algebra, matrix_algebra,
    truncated_polynomial_algebra,
)
from monmorita.bgdkit import (
    check_bialgebroid, check_bialgebroid_map, eta_map, regular_module, sweedler_bialgebroid,
)
from monmorita.examples import (
    BaseChangeData, apply_drinfeld_twist, bicharacter_ad, build_azumaya_cell, build_bicharacter_twist,
    build_blowup, build_inverse_azumaya_cell, check_twist, group_bialgebroid, inverse_twist, sqm_base_change,
)
from monmorita.exactfield import QQ, Field, hstack, kron
from monmorita.modkit import TensorProduct, progenerator_report
from monmorita.moritakit import (
    FrobeniusData, antipode, check_one_cell, endomorphism_bialgebroid, hp_apply, hp_monoidal_maps, lambda_map,
    morita_verdict, pullback_cell, regular_cell, strongness_check,
)

GF7 = Field(7)
ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir)


def qz2():
    return group_bialgebroid(QQ, cyclic_group_table(2), name="QZ2")


def criterion_1():
    worst, counts, bad = 0.0, set(), []
    for R in (ground_algebra(QQ), diagonal_algebra(QQ, 2), matrix_algebra(QQ, 2), matrix_algebra(GF7, 2),
              group_bialgebroid(QQ, cyclic_group_table(2)).total):
        t = time.perf_counter()
        rep = check_bialgebroid(sweedler_bialgebroid(R))
        dt = time.perf_counter() - t
        worst = max(worst, dt)
        counts.add(len(rep.items))
        if not rep.ok or dt >= 2:
            bad.append((R.name, rep.failures(), round(dt, 2)))
    return not bad, "5 algebras, %s labelled checks each, slowest %.2fs%s" % (
        "/".join(map(str, sorted(counts))), worst, "; failing %s" % bad if bad else "")


def criterion_2():
    t = time.perf_counter()
    B = qz2()
    A, P = build_blowup(B, 2)
    parts = {}
    parts["A"] = check_bialgebroid(A).ok
    parts["P"] = check_one_cell(P).ok
    parts["progenerator"] = progenerator_report(P.bimodule).ok
    st = strongness_check(P)
    w = st.items["strong.variant2"]["witness"]
    parts["strong 32x32"] = st.ok and w["shape"] == [32, 32] and w["rank"] == 32
    lam = check_bialgebroid_map(lambda_map(P, endomorphism_bialgebroid(P, st.data)))
    parts["lambda iso"] = lam.ok and bool(lam.meta["isomorphism"])
    parts["verdict"] = bool(morita_verdict(P).meta["equivalent"])
    dt = time.perf_counter() - t
    ok = all(parts.values()) and dt < 10
    failing = [k for k, v in parts.items() if not v]
    return ok, "variant2 %s rank %s, %.2fs%s" % (w["shape"], w["rank"], dt,
                                                 "; failing %s" % failing if failing else "")


def criterion_3():
    t = time.perf_counter()
    good = morita_verdict(build_azumaya_cell(matrix_algebra(QQ, 2)))
    dims = good.meta.get("certificate", {}).get("dims", {})
    bad = morita_verdict(build_azumaya_cell(truncated_polynomial_algebra(QQ, 2)))
    dt = time.perf_counter() - t
    progen_fails = [k for k in bad.failures() if k.startswith("progen.")]
    ok = (good.meta["equivalent"] and dims.get("E") == 1 and dims.get("T") == 1
          and not bad.meta["equivalent"] and bad.meta["first_failure"] == "progen.projective"
          and bad.meta["stages"] == ["cell", "progenerator"] and dt < 5)
    return ok, "Mat2 E=%s T=%s; Q[x]/x^2 first failure %s (progenerator items failing: %s), %.2fs" % (
        dims.get("E"), dims.get("T"), bad.meta["first_failure"], ", ".join(progen_fails), dt)


def criterion_4():
    t = time.perf_counter()
    TD = build_bicharacter_twist(QQ, (2, 2), bicharacter_ad)
    B = TD.bialgebroid
    parts = {}
    parts["twist0-2"] = check_twist(TD).ok
    Bt, P = apply_drinfeld_twist(TD)
    parts["B~ axioms"] = check_bialgebroid(Bt).ok
    parts["Delta~ != Delta"] = Bt.delta != B.delta
    parts["verdict"] = bool(morita_verdict(P).meta["equivalent"])
    trivial = build_bicharacter_twist(QQ, (2, 2), lambda x, y: 1)
    Bt1, _ = apply_drinfeld_twist(trivial)
    parts["J=1(x)1 exact"] = (Bt1.delta == trivial.bialgebroid.delta and Bt1.epsilon == trivial.bialgebroid.epsilon)
    back, _ = apply_drinfeld_twist(inverse_twist(TD, Bt))
    parts["J then J^-1"] = back.delta == B.delta
    dt = time.perf_counter() - t
    failing = [k for k, v in parts.items() if not v]
    note = ""
    if "Delta~ != Delta" in failing:
        note = " (Q[Z2xZ2] is commutative, so J Delta J^-1 = Delta)"
    return not failing and dt < 5, "%.2fs%s" % (dt, "; failing %s%s" % (failing, note) if failing else "")


def suite_cells():
    B = qz2()
    K = group_bialgebroid(QQ, cyclic_group_table(1), name="k")
    Mat2 = matrix_algebra(QQ, 2)
    TD = build_bicharacter_twist(QQ, (2, 2), bicharacter_ad)
    return [
        regular_cell(B),
        regular_cell(sweedler_bialgebroid(diagonal_algebra(QQ, 2))),
        build_blowup(B, 2)[1],
        build_blowup(group_bialgebroid(GF7, cyclic_group_table(3)), 2)[1],
        build_blowup(K, 3)[1],
        build_azumaya_cell(ground_algebra(QQ)),
        build_azumaya_cell(Mat2),
        build_inverse_azumaya_cell(Mat2),
        build_azumaya_cell(diagonal_algebra(QQ, 2)),
        build_azumaya_cell(truncated_polynomial_algebra(QQ, 2)),
        apply_drinfeld_twist(TD)[1],
    ]


def criterion_5():
    strong, bad = 0, []
    cells = suite_cells()
    for P in cells:
        st = strongness_check(P)
        if not st.ok:
            continue
        strong += 1
        endo = endomorphism_bialgebroid(P, st.data)
        if not (check_bialgebroid(endo.bialgebroid).ok and check_one_cell(endo.cell).ok):
            bad.append(P.name)
    return not bad and strong > 0, "%d of %d suite cells strong, %d exceptions%s" % (
        strong, len(cells), len(bad), " %s" % bad if bad else "")


def criterion_6():
    A, _ = build_blowup(qz2(), 2)
    Q = pullback_cell(eta_map(A))
    M = regular_module(A)
    one = A.total.unit
    H = hp_apply(Q, M)

    def ev(Hm, d):
        return hstack([h @ one for h in Hm.hom.basis], QQ, d)

    mm = hp_monoidal_maps(Q, M, M)
    evM = ev(H, M.dim)
    square2 = ev(mm.codomain2, mm.tensor_mn.dim) @ mm.map2 == mm.tensor_dom.induce_pair(evM, evM,
                                                                                       target=mm.tensor_mn)
    square0 = ev(mm.codomain0, A.base.dim) @ mm.map0 == QQ.eye(A.base.dim)
    return H.dim == M.dim and square2 and square0, "dim Ha(eta*)(A) = %d = dim A; tensor square %s, unit square %s" % (
        H.dim, square2, square0)


def criterion_7():
    t = time.perf_counter()
    R = matrix_algebra(QQ, 2)
    A, X, Y = sqm_base_change(BaseChangeData(build_azumaya_cell(R), build_inverse_azumaya_cell(R), qz2()))
    rep = check_bialgebroid(A)
    verdict = morita_verdict(X)
    dt = time.perf_counter() - t
    ok = A.dim == 32 and rep.ok and verdict.meta["equivalent"] and dt < 30
    return ok, "dim A = %d, axioms %s, X equivalent %s, %.2fs" % (A.dim, rep.ok, verdict.meta["equivalent"], dt)


def criterion_8():
    K = group_bialgebroid(QQ, cyclic_group_table(1), name="k")
    _, P = build_blowup(K, 3)
    F = FrobeniusData(QQ.from_sparse(3, 9, {(i, 4 * i): 1 for i in range(3)}), QQ.column([1, 1, 1]))
    endo = endomorphism_bialgebroid(P)
    S, rep = antipode(P, F, endo)
    H = endo.hom_E
    transpose = all(H.element(S.column(i)) == H.basis[i].T for i in range(H.dim))
    E = endo.E
    rng = random.Random(2024)
    anti = True
    for _ in range(100):
        a = QQ.column([rng.randint(-5, 5) for _ in range(E.dim)])
        b = QQ.column([rng.randint(-5, 5) for _ in range(E.dim)])
        anti &= S @ E.mult(a, b) == E.mult(S @ b, S @ a)
    return rep.ok and transpose and anti, "S_E = transpose %s, anti-multiplicative on 100 pairs %s" % (
        transpose, anti)


def brute_force_dim(T):
    """``dim M (x)_S N`` from the span of all ``m.s (x) n - m (x) s.n`` in ``M (x)_k N``."""
    f = T.field
    IM, IN = f.eye(T.dim_m), f.eye(T.dim_n)
    rel = hstack([kron(R, IN) - kron(IM, L) for R, L in zip(T.m_right, T.n_left)], f, T.dim_m * T.dim_n)
    return T.dim_m * T.dim_n - rel.rank()


def criterion_9():
    seen = []
    init = TensorProduct.__init__

    def recording(self, *a, **k):
        init(self, *a, **k)
        seen.append(self)

    TensorProduct.__init__ = recording
    try:
        for c in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6):
            c()
    finally:
        TensorProduct.__init__ = init
    small = [T for T in seen if T.dim_m * T.dim_n <= 64]
    mismatch = [(T.dim_m, T.dim_n, T.dim, brute_force_dim(T)) for T in small if T.dim != brute_force_dim(T)]
    return bool(small) and not mismatch, "%d tensor constructions with ambient dim <= 64 (of %d), %d mismatches%s" % (
        len(small), len(seen), len(mismatch), " %s" % mismatch[:3] if mismatch else "")


def suite_report():
    """Deterministic JSON of a representative run of the checkers."""
    out = []
    for R in (ground_algebra(QQ), matrix_algebra(QQ, 2), matrix_algebra(GF7, 2)):
        out.append(check_bialgebroid(sweedler_bialgebroid(R)).to_json())
    A, P = build_blowup(qz2(), 2)
    out.append(check_bialgebroid(A).to_json())
    out.append(morita_verdict(P).to_json())
    out.append(morita_verdict(build_azumaya_cell(truncated_polynomial_algebra(QQ, 2))).to_json())
    out.append(check_twist(build_bicharacter_twist(QQ, (2, 2), bicharacter_ad)).to_json())
    return "".join(out)


def criterion_10():
    a, b = suite_report(), suite_report()
    runs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        runs.append(subprocess.run([sys.executable, "-m", "monmorita.cli", "report", "-w",
                                    os.path.join(ROOT, "fixtures", "blowup_z2.json")],
                                   capture_output=True, env=env).stdout)
    same = a == b and runs[0] == runs[1] and len(runs[0]) > 0
    return same, "in-process reports %d bytes identical %s; CLI reports across hash seeds identical %s" % (
        len(a), a == b, runs[0] == runs[1] and len(runs[0]) > 0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10]


def run_criterion(n):
    t = time.perf_counter()
    ok, detail = CRITERIA[n - 1]()
    line = "ACCEPTANCE %2d: %s  (%.1fs)  %s" % (n, "PASS" if ok else "FAIL", time.perf_counter() - t, detail)
    return ok, line


@pytest.mark.parametrize("n", range(1, 11))
def test_acceptance(n, capsys):
    ok, line = run_criterion(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n) for n in range(1, 11)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
