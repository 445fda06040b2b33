"""Truncated Iwasawa-algebra Eisenstein coefficients and specialization."""

import pytest

from eiscomp.lambda_eis import (
    LambdaEisenstein,
    build_lambda_eisenstein,
    family_json,
    lambda_eis_coeff,
    specialize_and_compare,
)
from eiscomp.padic import LambdaPoly, PadicInt, a_t_poly, eval_lambda, teichmuller


def test_coefficient_at_one_is_constant_one():
    f = lambda_eis_coeff(5, 0, 1, 4, 3)
    assert f.coeffs == (1, 0, 0, 0)


def test_coefficient_at_p_only_t_one_survives():
    f = lambda_eis_coeff(7, 2, 7, 5, 3)
    assert f.coeffs == (1, 0, 0, 0, 0)


def test_coefficient_at_two_matches_a2():
    # n = 2, d = 0, p = 5: coefficient is 1 + A_2(T)
    p, m, d_t = 5, 2, 3
    f = lambda_eis_coeff(p, 0, 2, d_t, m)
    a2 = a_t_poly(2, p, d_t, m)
    want = tuple((1 if j == 0 else 0) + c for j, c in enumerate(a2.coeffs))
    assert f.coeffs == tuple(c % p**m for c in want)


def test_unit_times_a_t_specializes_to_power():
    # omega^d(t) * A_t(gamma^d - 1) = t^(d+1)
    p, m, d_t = 7, 3, 6
    for d in (0, 2, 4):
        x = PadicInt(pow(1 + p, d, p**m) - 1, p, m)
        for t in (2, 3, 4, 5, 6, 8):
            if t % p == 0:
                continue
            at = a_t_poly(t, p, d_t, m)
            om_d = pow(teichmuller(t, p, m).value, d, p**m)
            val = eval_lambda(at.scale(om_d), x)
            assert val.value == pow(t, d + 1, p**val.prec)


def test_specialization_battery():
    for p in (5, 7):
        for d in range(0, p - 2, 2):
            fam = build_lambda_eisenstein(p, d, 20, 6, 3)
            rep = specialize_and_compare(fam)
            assert rep.coefficients_match, (p, d, rep.mismatches)
            if d < p - 3:
                assert rep.constant_term_checked and rep.constant_term_match
            else:
                assert not rep.constant_term_checked
            assert rep.ok


def test_specializations_at_congruent_weights_agree_mod_p():
    # evaluating the same family at d and d + (p-1) agrees mod p
    p, d, m, d_t = 7, 2, 3, 6
    fam = build_lambda_eisenstein(p, d, 15, d_t, m)
    x1 = PadicInt(pow(1 + p, d, p**m) - 1, p, m)
    x2 = PadicInt(pow(1 + p, d + p - 1, p**m) - 1, p, m)
    for n in range(1, 15):
        v1 = eval_lambda(fam.coefficient(n), x1)
        v2 = eval_lambda(fam.coefficient(n), x2)
        assert v1.value % p == v2.value % p


def test_fault_injection_detected():
    fam = build_lambda_eisenstein(5, 2, 12, 5, 2)
    bad = dict(fam.coeffs)
    victim = bad[6]
    bad[6] = LambdaPoly(
        tuple(c + 1 if j == 0 else c for j, c in enumerate(victim.coeffs)),
        victim.p,
        victim.prec,
    )
    doctored = LambdaEisenstein(
        p=fam.p, d=fam.d, q_prec=fam.q_prec, t_trunc=fam.t_trunc,
        digits=fam.digits, coeffs=bad,
    )
    rep = specialize_and_compare(doctored)
    assert not rep.coefficients_match
    assert rep.mismatches == [6]
    assert not rep.ok


def test_exponent_range_enforced():
    with pytest.raises(ValueError):
        lambda_eis_coeff(7, 3, 2, 4, 2)  # odd d
    with pytest.raises(ValueError):
        lambda_eis_coeff(7, 6, 2, 4, 2)  # d > p - 3


def test_family_json_dump():
    fam = build_lambda_eisenstein(5, 0, 6, 4, 2)
    blob = family_json(fam)
    assert blob["p"] == 5 and blob["coefficients"]["1"] == [1, 0, 0, 0]
