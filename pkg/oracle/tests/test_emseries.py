"""Unit checks for the asymptotic-form algebra and tail acceleration."""

from mpmath import mp, mpf

import pytest

from mtoracle.emseries import (
    bern,
    boole_upper_form,
    em_upper_form,
    euler_at_zero,
    form_add,
    form_antideriv,
    form_compose_shift,
    form_deriv,
    form_eval,
    form_prune,
    form_shift_power,
)
from mtoracle.errors import AccelerationError


def setup_module(_mod):
    mp.dps = 60


def test_exact_constants():
    assert bern(0) == 1
    assert bern(1) == mpf(-1) / 2
    assert bern(2) == mpf(1) / 6
    assert bern(3) == 0
    assert bern(12) == mpf(-691) / 2730
    assert euler_at_zero(0) == 1
    assert euler_at_zero(1) == mpf(-1) / 2
    assert euler_at_zero(2) == 0
    assert euler_at_zero(3) == mpf(1) / 4
    assert euler_at_zero(5) == mpf(-1) / 2


def test_deriv_antideriv_roundtrip():
    f = {(3, 2): mpf(5), (2, 0): mpf(-1), (4, 1): mpf(7)}
    back = form_deriv(form_antideriv(f))
    for key, c in f.items():
        assert abs(back[key] - c) < mpf(10) ** -50


def test_antideriv_log_branch():
    # d/dx of ln(x)^3 / 3 is ln(x)^2 / x
    a = form_antideriv({(1, 2): mpf(1)})
    assert set(a) == {(0, 3)}
    assert abs(a[(0, 3)] - mpf(1) / 3) < mpf(10) ** -55


def test_antideriv_rejects_pure_log_powers():
    with pytest.raises(AccelerationError):
        form_antideriv({(0, 1): mpf(1)})


def test_form_eval_and_prune():
    f = {(2, 1): mpf(3), (5, 0): mpf(10) ** -40}
    x = mpf(50)
    want = 3 * mp.log(x) / x**2 + mpf(10) ** -40 / x**5
    assert abs(form_eval(f, x) - want) < mpf(10) ** -55
    pruned = form_prune(f, 50, mpf(10) ** -30, mp.log(x))
    assert set(pruned) == {(2, 1)}


def test_compose_shift_matches_direct_evaluation():
    f = {(1, 0): mpf(2), (2, 1): mpf(-3), (3, 2): mpf(1) / 7}
    eps = mpf(10) ** -50
    g = form_compose_shift(f, 1, 40, eps)
    for x in (40, 47, 63):
        direct = form_eval(f, mpf(x + 1))
        composed = form_eval(g, mpf(x))
        assert abs(direct - composed) < 100 * eps


def test_compose_shift_keeps_factorially_large_tails():
    # high inverse powers with huge coefficients stay meaningful near the
    # expansion point; dropping them wholesale once cost 20 digits
    f = {(39, 0): mpf(10) ** 24, (90, 0): mpf(10) ** 96, (2, 0): mpf(1)}
    eps = mpf(10) ** -55
    g = form_compose_shift(f, 1, 54, eps)
    for x in (54, 55, 70):
        direct = form_eval(f, mpf(x + 1))
        composed = form_eval(g, mpf(x))
        assert abs(direct - composed) < 1000 * eps


def test_harmonic_tail_step_one():
    # partial sums of 1/n: the matched constant is Euler's gamma
    eps = mpf(10) ** -45
    F = em_upper_form({(1, 0): mpf(1)}, 1, 60, eps)
    heads = [mpf(0)] * 102
    for n in range(1, 101):
        heads[n + 1] = heads[n] + mpf(1) / n
    K = heads[90] - form_eval(F, 90)
    assert abs(K - mp.euler) < mpf(10) ** -42
    assert abs(heads[61] - K - form_eval(F, 61)) < mpf(10) ** -42


def test_odd_class_tail_step_two():
    # sum over odd n of 1/n^2 converges to pi^2/8
    eps = mpf(10) ** -45
    F = em_upper_form({(2, 0): mpf(1)}, 2, 61, eps)
    heads = [mpf(0)] * 122
    for n in range(1, 121):
        heads[n + 1] = heads[n] + (mpf(1) / n**2 if n % 2 else 0)
    K = heads[91] - form_eval(F, 91)  # 91 is in the odd class
    assert abs(K - mp.pi**2 / 8) < mpf(10) ** -42


def test_alternating_tail():
    # sum (-1)^n/n = -log 2, and sum (-1)^n ln(n)/n has a classical constant
    eps = mpf(10) ** -45
    G = boole_upper_form({(1, 0): mpf(1)}, 60, eps)
    heads = [mpf(0)] * 122
    for n in range(1, 121):
        heads[n + 1] = heads[n] + (-1) ** n * mpf(1) / n
    K = heads[91] - (-1) ** 91 * form_eval(G, 91)
    assert abs(K - (-mp.log(2))) < mpf(10) ** -42
    # both parities of the endpoint must reconstruct
    for N in (80, 81):
        got = K + (-1) ** N * form_eval(G, N)
        assert abs(heads[N] - got) < mpf(10) ** -42

    G2 = boole_upper_form({(1, 1): mpf(1)}, 60, eps)
    heads2 = [mpf(0)] * 122
    for n in range(1, 121):
        heads2[n + 1] = heads2[n] + (-1) ** n * mp.log(n) / n
    K2 = heads2[90] - (-1) ** 90 * form_eval(G2, 90)
    want = mp.euler * mp.log(2) - mp.log(2) ** 2 / 2
    assert abs(K2 - want) < mpf(10) ** -40


def test_stalling_series_is_reported():
    # an expansion point far too small for the requested accuracy must fail
    # loudly rather than return a bad form
    with pytest.raises(AccelerationError):
        em_upper_form({(1, 0): mpf(1)}, 1, 4, mpf(10) ** -55)


def test_shift_power():
    f = {(2, 1): mpf(3)}
    assert form_shift_power(f, 4) == {(6, 1): mpf(3)}
    assert form_add({(1, 0): mpf(1)}, {(1, 0): mpf(2)}) == {(1, 0): mpf(3)}
