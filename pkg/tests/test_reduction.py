import itertools
from fractions import Fraction

import pytest
from mpmath import mp

from mtzeta.exact import binomial
from mtzeta.mzvconvert import mt_to_mzv
from mtzeta.numerics import EvalConfig, eval_expr
from mtzeta.reduction import (
    cyclic_sum_identity,
    depth2_identity,
    finite_sum_check,
    quad_e2,
    quad_e3,
    quad_e4,
    quad_identity,
    quad_ones_identity,
    strong_reduction_pair,
    subset_reduction,
)
from mtzeta.symexpr import EvenZeta, Expr, Lerch, MTValue, Z, lerch, mt_value, mzv


def test_subset_reduction_smallest_case():
    # E((1,1), {1,2}, a) = 4 zeta(0) phi(z+2, a), i.e. -2 phi(z+2, a)
    a = Fraction(1, 5)
    e = subset_reduction((1, 1), (1, 2), a)
    assert e == Expr.term(4, (EvenZeta(0), lerch(Z.shift(2), a)))


def test_subset_reduction_rejects_small_subsets():
    with pytest.raises(ValueError):
        subset_reduction((1, 2), (1,), 0)


def test_subset_reduction_depth_bound():
    # every MT atom has depth k+1-len(subset) <= k-1
    s = (1, 2, 1, 2)
    for size in (2, 3, 4):
        for subset in itertools.combinations(range(1, 5), size):
            for atoms, _ in subset_reduction(s, subset, 0).items():
                for a in atoms:
                    if isinstance(a, MTValue):
                        assert a.depth == len(s) + 1 - size <= len(s) - 1
                    else:
                        assert isinstance(a, (EvenZeta, Lerch))


def test_cyclic_lhs_sign_pattern():
    # relative signs match the published depth-3 arrangement: dividing out
    # the full term's sign, rotation j carries -(-1)^{s_j} ... i.e. the
    # pattern (+, -(-1)^{s_1}, ...) after scaling by (-1)^{k+|s|}
    s = (2, 3, 1)
    ident = cyclic_sum_identity(s, 0)
    full_sign = ident.lhs[0][0]
    assert full_sign == (-1) ** (3 + sum(s))
    for j, (sign, _) in enumerate(ident.lhs[1:], start=1):
        assert sign == (-1) ** s[j - 1]


def test_worked_identity_11():
    ident = cyclic_sum_identity((1, 1), 0)
    assert ident.rhs == Expr.term(4, (EvenZeta(0), lerch(Z.shift(2), 0)))
    # at z=2: MT(1,1,2) - 2 MT(2,1,1) = -2 zeta(4) = -pi^4/45
    lhs_val = eval_expr(ident.lhs_expr(), 2)
    with mp.workprec(280):
        assert abs(mp.mpc(lhs_val.value) + mp.pi**4 / 45) <= lhs_val.bound + 1e-70
    r = ident.residual(2)
    assert abs(complex(r.value)) <= r.bound
    assert abs(complex(r.value)) < 1e-10


def test_worked_identity_12():
    # rearranges to MT(2,2,1) = -3 zeta(5) + 2 zeta(2) zeta(3)
    ident = cyclic_sum_identity((1, 2), 0)
    r = ident.residual(2)
    assert abs(complex(r.value)) <= r.bound
    assert abs(complex(r.value)) < 1e-10
    mt221 = eval_expr(Expr.atom(mt_value((2, 2, 1), (0, 0, 0))))
    with mp.workprec(280):
        target = -3 * mp.zeta(5) + 2 * (mp.pi**2 / 6) * mp.zeta(3)
        assert abs(mp.mpc(mt221.value) - target) <= mt221.bound + 1e-60


def test_inclusion_exclusion_lemma():
    for k in range(2, 13):
        for r in range(1, k):
            assert sum(binomial(k - r, t - r) * (-1) ** t for t in range(r, k + 1)) == 0


@pytest.mark.parametrize("alpha", [0, Fraction(1, 3)])
def test_depth2_equals_generic(alpha):
    for a in range(1, 5):
        for b in range(1, 5):
            d2 = depth2_identity(a, b, alpha)
            th = cyclic_sum_identity((a, b), alpha)
            assert d2.lhs == th.lhs
            assert d2.rhs == th.rhs


def test_depth2_rhs_symmetric_in_ab():
    for a in range(1, 5):
        for b in range(1, 5):
            assert depth2_identity(a, b, 0).rhs == depth2_identity(b, a, 0).rhs


def test_quad_terms_match_generic_subsets():
    for n in (1, 2, 3):
        s4 = (n,) * 4
        alpha = Fraction(1, 3)
        assert quad_e2(n, alpha) == subset_reduction(s4, (1, 2), alpha)
        assert quad_e3(n, alpha) == subset_reduction(s4, (1, 2, 3), alpha)
        assert quad_e4(n, alpha) == subset_reduction(s4, (1, 2, 3, 4), alpha)
        # subsets of equal size coincide for equal exponents
        for subset in itertools.combinations(range(1, 5), 2):
            assert subset_reduction(s4, subset, alpha) == quad_e2(n, alpha)


def test_quad_identity_structure_and_value():
    qi = quad_identity(2, 0)
    th = cyclic_sum_identity((2, 2, 2, 2), 0)
    assert qi.rhs == th.rhs
    assert qi.lhs_expr() == th.lhs_expr()
    r = quad_identity(1, 0).residual(2)
    assert abs(complex(r.value)) <= r.bound
    assert abs(complex(r.value)) < 1e-10


def test_quad_ones_identity():
    qo = quad_ones_identity(0)
    th = cyclic_sum_identity((1, 1, 1, 1), 0)
    assert qo.lhs_expr() == th.lhs_expr().scale(-1)
    r = qo.residual(2)
    assert abs(complex(r.value)) <= r.bound
    assert abs(complex(r.value)) < 1e-10
    # e2/e3/e4 specializations printed for n=1 (zeta(0) kept symbolic)
    a = Fraction(1, 7)
    assert quad_e2(1, a) == Expr.term(
        4, (EvenZeta(0), mt_value((1, 1, Z, 2), (0, 0, a, 0)))
    )


def test_strong_reduction_matches_conversion_route():
    for n in (1, 2, 3):
        lhs, rhs = strong_reduction_pair(n)
        derived = (
            mt_to_mzv((1, 1, n, 2)).scale(12)
            + Expr.atom(EvenZeta(2)) * mt_to_mzv((1, n, 1)).scale(24)
            - mt_to_mzv((1, n, 3)).scale(24)
            - Expr.atom(EvenZeta(2)) * Expr.atom(mzv((n + 2,), (0,))).scale(24)
            + Expr.atom(mzv((n + 4,), (0,))).scale(24)
        )
        assert rhs == derived


def test_strong_reduction_72_zeta5():
    lhs, rhs = strong_reduction_pair(1)
    lv, rv = eval_expr(lhs), eval_expr(rhs)
    with mp.workprec(280):
        target = 72 * mp.zeta(5)
        assert abs(mp.mpc(lv.value) - target) <= lv.bound + 1e-60
        assert abs(mp.mpc(rv.value) - target) <= rv.bound + 1e-60


def test_mordell_shortcut():
    # 4 MT({1}_3,1,1) - MT({1}_4,1) = 3 MT({1}_5) = 3*4! zeta(5)
    lhs, _ = strong_reduction_pair(1)
    v = eval_expr(lhs)
    w = eval_expr(Expr.atom(mt_value((1,) * 5, (0,) * 5)).scale(3))
    assert abs(complex(v.value) - complex(w.value)) <= v.bound + w.bound


def test_finite_sum_check_n1_hand_case():
    # k=3, i={1,2}, N=1: exactly one admissible tuple on each side
    s = (1, 2, 1)
    lhs, rhs = finite_sum_check(s, (1, 2), 0, 1, 1)
    # S for j={1}: m1 = m2+m3+m4 impossible at N=1; j={2} same;
    # j={1,2}: m1+m2 = m3+m4 holds at all-ones: value (-1)^{s1+s2} * 1
    assert abs(rhs - (-1.0)) < 1e-14
    assert abs(lhs - rhs) < 1e-14


@pytest.mark.parametrize(
    "s,subset,alpha,z0,N",
    [
        ((2, 1), (1, 2), Fraction(1, 3), 2, 30),
        ((1, 1, 1), (1, 2), Fraction(1, 2), 1, 20),
        ((3, 3), (2,), 0, complex(2, 1), 25),
        ((1, 2, 3), (1, 2, 3), Fraction(1, 3), 1, 15),
    ],
)
def test_finite_sum_check_cases(s, subset, alpha, z0, N):
    lhs, rhs = finite_sum_check(s, subset, alpha, z0, N)
    assert abs(lhs - rhs) < 1e-10


def test_numeric_truth_small_grid():
    # identities hold numerically at several z and colors; bounds may be
    # weak on colored paths but must contain the residual
    cfg = EvalConfig(precision_bits=160, target_tol=1e-12)
    for s in [(1, 1), (2, 1), (2, 2), (3, 1), (1, 1, 1), (2, 1, 1), (2, 2, 3)]:
        for alpha in (0, Fraction(1, 2), Fraction(1, 3)):
            ident = cyclic_sum_identity(s, alpha)
            for z0 in (1, 2, Fraction(3, 2)):
                r = ident.residual(z0, cfg)
                assert abs(complex(r.value)) <= r.bound, (s, alpha, z0)


def test_cyclic_sum_identity_input_validation():
    with pytest.raises(ValueError):
        cyclic_sum_identity((3,), 0)
    with pytest.raises(ValueError):
        cyclic_sum_identity((1, 0), 0)
    with pytest.raises(ValueError):
        cyclic_sum_identity((1, 1), 0).residual(Fraction(1, 2))


def test_rhs_atoms_have_lower_depth():
    for s in [(1, 2), (2, 1, 1), (1, 1, 2, 1)]:
        ident = cyclic_sum_identity(s, Fraction(1, 3))
        for atoms, _ in ident.rhs.items():
            for a in atoms:
                if isinstance(a, MTValue):
                    assert a.depth <= len(s) - 1
                else:
                    assert isinstance(a, (EvenZeta, Lerch))
