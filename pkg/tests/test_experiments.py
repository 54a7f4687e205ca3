import math

import pytest
from hypothesis import given, settings, strategies as st

from zladder.errors import DomainError
from zladder.experiments import (ExperimentConfig, degeneracy_check, main_term, rho_k, run_correlation,
                                 run_correlation_pair, run_cubic, run_equal_areas, run_four_way,
                                 run_splitting, shift_bound_L, shift_sum_index, split_main_term,
                                 symmetric_config)
from zladder.rs_zeta import ShiftTriple

HALF_PI = math.pi / 2
angle = st.floats(min_value=-HALF_PI, max_value=HALF_PI)
shift = st.floats(min_value=-2.0, max_value=2.0)


def test_main_term_closed_forms():
    sh = ShiftTriple.at(1e6)
    assert main_term("G5", -HALF_PI, HALF_PI, 1e4, sh) == pytest.approx(2 / math.pi * 1e4, rel=1e-15)
    assert main_term("G5", 0.3, 0.3, 1e4, sh) == 0.0
    with pytest.raises(DomainError):
        main_term("G4", 0.0, 0.1, 1.0, sh)


def test_config_validation():
    with pytest.raises(DomainError):
        ExperimentConfig.make(1e5, 1e3, 0.5, 0.1)
    with pytest.raises(DomainError):
        ExperimentConfig.make(1e5, -1.0)
    with pytest.raises(DomainError):
        ExperimentConfig(1e5, 1e3, -1.0, 1.0, -1.0, 1.0, ShiftTriple.at(2e5))
    cfg = ExperimentConfig.make(1e5, 1e3, -1.0, 1.0, rho=(0.1, 0.2, 0.3))
    assert cfg.shifts.P ** 2 == pytest.approx(1e5 / (2 * math.pi), rel=1e-12)
    assert cfg.to_dict()["shifts"]["rho2"] == 0.2


def test_degeneracy_warnings():
    assert degeneracy_check(ExperimentConfig.make(1e5, 1e3, -1.0, 1.0)) == []
    # phase pi - 0.03 sits inside the 0.1 rad guard
    w = degeneracy_check(ExperimentConfig.make(1e5, 1e3, HALF_PI - 0.03, HALF_PI, -1.0, 1.0))
    assert len(w) == 1 and w[0].startswith("x")


def test_phase_exactly_pi_warns():
    cfg = ExperimentConfig.make(1e5, 1e3, HALF_PI - 1.0, HALF_PI, -1.0, 1.0)
    cfg = cfg.with_shifts(0.0, 0.0, (math.pi - (cfg.x1 + cfg.x2)) / (2 * math.log(cfg.shifts.P)))
    assert any(w.startswith("x") for w in degeneracy_check(cfg))
    bound = 2 / math.pi * cfg.U * math.sin((cfg.x2 - cfg.x1) / 2) * 0.1
    assert abs(main_term("G5", cfg.x1, cfg.x2, cfg.U, cfg.shifts)) < bound


def test_correlation_report_fields():
    cfg = ExperimentConfig.make(1e4, 300.0, rho=(0.0, 0.05, -0.05))
    rep = run_correlation(cfg, "g5")
    assert rep.family == "G5"
    assert rep.lhs_hatted == 2 * rep.lhs_cubic
    assert rep.abs_dev == abs(rep.lhs_cubic - rep.main_term)
    assert rep.rel_dev == rep.abs_dev / abs(rep.main_term)
    assert rep.error_scale == pytest.approx(1e4 ** (13 / 16))
    assert rep.quad_err >= 0 and rep.window_warnings
    assert "warnings" in rep.to_dict()


def test_vanishing_set():
    cfg = ExperimentConfig.make(1e4, 300.0, 0.2 - 1e-12, 0.2)
    rep = run_correlation(cfg, "G5")
    assert abs(rep.lhs_cubic) < 1e-6 and abs(rep.main_term) < 1e-8


def test_endpoint_additivity():
    T, U = 1e4, 300.0
    vals = [run_correlation(ExperimentConfig.make(T, U, a, b), "G5").lhs_cubic
            for a, b in ((-1.2, 0.1), (0.1, 1.3), (-1.2, 1.3))]
    assert vals[0] + vals[1] == pytest.approx(vals[2], abs=1e-5)


def test_pair_decomposition_carries_main_term():
    pair = run_correlation_pair(ExperimentConfig.make(1e4, 1e3))
    assert pair.odd_part == pytest.approx((pair.g5.lhs_cubic - pair.g6.lhs_cubic) / 2)
    assert pair.g5.main_term == -pair.g6.main_term


def test_ceiling_and_domain_guards():
    with pytest.raises(DomainError):
        run_correlation(ExperimentConfig.make(9.999e6, 1e4), "G5")
    with pytest.raises(DomainError):
        run_correlation(ExperimentConfig.make(20.0, 10.0, rho=(-15.0, 0.0, 0.0)), "G5")


def test_splitting_main_terms():
    P = math.sqrt(1e6 / (2 * math.pi))
    assert split_main_term("G5", -1.0, 0.5, 1e4, 0.0) == -split_main_term("G5", -1.0, 0.5, 1e4, math.pi)
    for k in (0, 1, 2):
        rho = rho_k(k, 0.7, P)
        a = main_term("G5", -1.0, 0.5, 1e4, ShiftTriple.at(1e6, 0.0, rho, rho))
        assert a == pytest.approx(split_main_term("G5", -1.0, 0.5, 1e4, 0.7), rel=1e-12)


def test_splitting_run_and_guards():
    cfg = ExperimentConfig.make(1e4, 200.0)
    rep = run_splitting(cfg, 1, 0.0)
    assert rep.g5.main_term == pytest.approx(rep.split_main_g5, rel=1e-12)
    assert rep.rho == pytest.approx(math.pi / math.log(cfg.shifts.P))
    four = run_four_way(cfg, 0)
    assert [r.z for r in four] == [0.0, math.pi]
    with pytest.raises(DomainError):
        run_splitting(cfg, shift_bound_L(1e4, 0.01) + 1, 0.0)
    with pytest.raises(DomainError):
        run_splitting(cfg, 0, 4.0)


def test_cubic_signs_of_main_terms():
    rep = run_cubic(1e4, 200.0, 1.0, 0.5)
    assert rep.g5.main_term == pytest.approx(2 / math.pi * 200.0 * math.sin(1.0))
    assert rep.g6.main_term == pytest.approx(-2 / math.pi * 200.0 * math.sin(0.5))
    with pytest.raises(DomainError):
        run_cubic(1e4, 200.0, 0.0)


def test_shift_sum_index():
    cfg = symmetric_config(1e5, 300.0, 1.0)
    assert shift_sum_index(cfg) == 0
    r = math.pi / math.log(cfg.shifts.P)
    assert shift_sum_index(cfg.with_shifts(0.0, r, r)) == 1
    with pytest.raises(DomainError):
        shift_sum_index(cfg.with_shifts(0.0, 0.1, 0.0))
    with pytest.raises(DomainError):
        shift_sum_index(cfg.with_shifts(0.0, 0.0, 2 * math.pi * 1000 / math.log(cfg.shifts.P)))


def test_equal_areas_small_run():
    rep = run_equal_areas(symmetric_config(2e3, 200.0, 1.4))
    assert rep.i_plus > 0 > rep.i_minus
    assert rep.additivity_gap_g5 + rep.additivity_gap_g6 <= rep.additivity_tol
    assert rep.measure_plus + rep.measure_minus == pytest.approx(rep.measure_total, rel=1e-6)
    with pytest.raises(DomainError):
        run_equal_areas(ExperimentConfig.make(2e3, 200.0, -1.0, 1.2))


@settings(max_examples=200, deadline=None)
@given(angle, angle, st.floats(min_value=1.0, max_value=1e5), shift, shift, shift,
       st.floats(min_value=1e3, max_value=1e7))
def test_main_term_antisymmetry(a, b, U, r1, r2, r3, T):
    sh = ShiftTriple.at(T, r1, r2, r3)
    assert main_term("G6", a, b, U, sh) == -main_term("G5", a, b, U, sh)


@settings(max_examples=100, deadline=None)
@given(angle, angle, shift, shift, st.floats(min_value=1e3, max_value=1e7))
def test_main_term_shift_periodicity(a, b, r1, r2, T):
    sh = ShiftTriple.at(T, r1, r2, 0.0)
    step = 2 * math.pi / math.log(sh.P)
    moved = ShiftTriple.at(T, r1, r2, step)
    assert main_term("G5", a, b, 1e4, moved) == pytest.approx(main_term("G5", a, b, 1e4, sh), abs=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=-20, max_value=20), st.floats(min_value=0.0, max_value=math.pi),
       st.floats(min_value=1e3, max_value=1e7))
def test_split_shift_periodicity_in_k(k, z, T):
    P = math.sqrt(T / (2 * math.pi))
    terms = [main_term("G5", -1.0, 0.7, 1e4, ShiftTriple.at(T, 0.0, rho_k(j, z, P), rho_k(j, z, P)))
             for j in (k, k + 1)]
    assert terms[1] == pytest.approx(terms[0], rel=1e-12, abs=1e-9)
