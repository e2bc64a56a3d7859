from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from shannon_bounds.rational_lp import (
    GE,
    LE,
    CertificateError,
    LpCertificate,
    LpProblem,
    format_lp,
    format_rational,
    parse_lp,
    parse_rational,
    solve,
    verify_certificate,
)


def c5_edge_lp(maximize=True):
    edges = [(i, (i + 1) % 5) for i in range(5)]
    rows = [([1 if v in e else 0 for v in range(5)], LE, 1) for e in edges]
    return LpProblem.build([1] * 5, rows, maximize)


def test_c5_edge_lp_value_and_certificate():
    cert = solve(c5_edge_lp())
    assert cert.status == "optimal" and cert.value == Fraction(5, 2)
    assert sum(cert.dual) == Fraction(5, 2)
    assert verify_certificate(c5_edge_lp(), cert)


def test_covering_lp_minimisation():
    rows = [([1 if v in ((i, (i + 1) % 5)) else 0 for i in range(5)], GE, 1) for v in range(5)]
    cert = solve(LpProblem.build([1] * 5, rows, maximize=False))
    assert cert.value == Fraction(5, 2)
    assert all(y >= 0 for y in cert.dual)


def test_infeasible_has_farkas_certificate():
    p = LpProblem.build([1, 1], [([1, 1], LE, 1), ([1, 1], GE, 3)])
    cert = solve(p)
    assert cert.status == "infeasible" and cert.farkas is not None
    assert verify_certificate(p, cert)


def test_unbounded_has_ray():
    p = LpProblem.build([1, 0], [([0, 1], LE, 1)])
    cert = solve(p)
    assert cert.status == "unbounded"
    assert cert.ray[0] > 0 and verify_certificate(p, cert)


def test_negative_rhs_rows_are_normalised():
    # x >= 2 written as -x <= -2; minimise x
    p = LpProblem.build([1], [([-1], LE, -2)], maximize=False)
    cert = solve(p)
    assert cert.value == 2 and verify_certificate(p, cert)


def test_degenerate_and_redundant_rows():
    p = LpProblem.build([1, 1], [([1, 1], LE, 1), ([2, 2], LE, 2), ([1, 0], GE, 0), ([1, 1], GE, 1)])
    cert = solve(p)
    assert cert.value == 1


def test_tampered_certificates_are_rejected():
    p = c5_edge_lp()
    cert = solve(p)
    assert not verify_certificate(p, replace(cert, value=cert.value + 1))
    bad_primal = (Fraction(1),) * 5
    assert not verify_certificate(p, replace(cert, primal=bad_primal))
    assert not verify_certificate(p, replace(cert, dual=tuple(y / 2 for y in cert.dual)))
    assert not verify_certificate(p, LpCertificate("unknown"))


def test_problem_validation():
    with pytest.raises(ValueError):
        LpProblem.build([1, 1], [([1], LE, 1)])
    with pytest.raises(ValueError):
        LpProblem.build([1], [([1], "==", 1)])


@st.composite
def small_lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    ints = st.integers(-4, 6)
    a = [[draw(ints) for _ in range(n)] for _ in range(m)]
    b = [draw(st.integers(-3, 8)) for _ in range(m)]
    rel = [draw(st.sampled_from([LE, GE])) for _ in range(m)]
    c = [draw(ints) for _ in range(n)]
    # a bounding row keeps most instances bounded
    a.append([1] * n)
    b.append(draw(st.integers(0, 10)))
    rel.append(LE)
    maximize = draw(st.booleans())
    return LpProblem.build(c, list(zip(a, rel, b)), maximize)


@given(small_lps())
def test_agrees_with_scipy_and_certificate_verifies(p):
    cert = solve(p)
    assert verify_certificate(p, cert)
    a_ub, b_ub = [], []
    for con in p.constraints:
        sign = 1 if con.relation == LE else -1
        a_ub.append([sign * float(x) for x in con.coefs])
        b_ub.append(sign * float(con.rhs))
    c = np.array([float(x) for x in p.objective]) * (-1 if p.maximize else 1)
    ref = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert cert.status == expected
    if expected == "optimal":
        ref_value = -ref.fun if p.maximize else ref.fun
        assert abs(float(cert.value) - ref_value) < 1e-7


def test_rational_format_roundtrip():
    for x in (Fraction(71, 9), Fraction(-3, 4), Fraction(7)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(5, 2)) == "5/2" and format_rational(3) == "3"


def test_lp_text_roundtrip():
    p = c5_edge_lp(maximize=False)
    back = parse_lp(format_lp(p))
    assert back == p
    assert solve(back).value == solve(p).value


def test_certificate_error_is_runtime_error():
    assert issubclass(CertificateError, RuntimeError)
