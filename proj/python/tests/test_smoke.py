import math

import pytest

import subrk


def test_heisenberg_origin():
    assert subrk.h(1, 1.0, 0.0, 0.0) == pytest.approx(1 / 32, rel=1e-10)


def test_sphere_d1_is_su2_over_pi_squared():
    for r, z in [(0.2, 0.1), (0.5, -0.4)]:
        assert subrk.p("sphere", r, z, 0.3) == pytest.approx(subrk.p("su2", r, z, 0.3) / math.pi**2, rel=1e-10)


def test_q_su2_branches_join():
    t, eps = 0.5, 1e-10
    assert subrk.q_su2(t, 1 - eps) == pytest.approx(subrk.q_su2(t, 1 + eps), rel=1e-8)


def test_empty_word_is_one():
    assert subrk.hermite("su2", "", 0.5, [0.5, 0.0, 0.3]) == pytest.approx(1.0)


def test_hermite_z_vanishes_at_z0():
    assert abs(subrk.hermite("su2", "Z", 0.5, [0.7, 0.3, 0.0])) < 1e-12


def test_word_round_trip():
    assert subrk.parse_word("sphere", "T1, T0", 2) == "T1,T0"


def test_converge_su2_report():
    rep = subrk.converge_su2("X", 1.0, 0.0, 0.5)
    assert rep["schema"] == 1
    assert rep["passed"]
    errs = [row["rel_err"] for row in rep["rows"][-4:]]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_lemma_suite_passes():
    rep = subrk.lemma_suite()
    assert rep["passed"]


def test_errors_are_typed():
    with pytest.raises(subrk.UsageError):
        subrk.parse_word("su2", "Q")
    with pytest.raises(subrk.DomainError):
        subrk.h(0, 1.0, 0.0, 0.0)
    assert issubclass(subrk.NumericalError, subrk.SubrkError)
