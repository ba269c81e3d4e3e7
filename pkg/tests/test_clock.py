import numpy as np
import pytest

from ccrlab import errors
from ccrlab.clock import (
    PASSAGE_TIME,
    TIME_OF_ARRIVAL,
    ClockConfig,
    WindowTooWide,
    clock_from_solution,
    clock_trace,
    commuting_factor,
    heisenberg_T,
    linearity_fit,
)
from ccrlab.matrix_core import evolve
from ccrlab.pair_builder import (
    PairParams,
    SpectrumSpec,
    build_degenerate,
    build_nondegenerate,
)


def clock_2d(a1=0.0, a2=0.0, e1=0.0, e2=1.0):
    sol = build_nondegenerate(SpectrumSpec.nondegenerate((e1, e2)),
                              PairParams(diag_a=np.array([a1, a2])))
    return sol, clock_from_solution(sol)


def test_config_rejects_commuting_pair():
    sol, _ = clock_2d()
    with pytest.raises(errors.ConstraintViolated):
        ClockConfig(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]), sol.domain)


def test_heisenberg_T_identity_at_zero():
    sol, cfg = clock_2d()
    assert np.allclose(heisenberg_T(cfg, 0.0), cfg.T, atol=1e-14)


def test_heisenberg_T_periodicity():
    sol, cfg = clock_2d()
    period = 2 * np.pi  # gap 1, hbar 1
    assert np.allclose(heisenberg_T(cfg, period), cfg.T, atol=1e-10)


def test_2d_closed_form_expectation():
    a1, a2 = 0.2, 0.9
    sol, cfg = clock_2d(a1, a2)
    phi = sol.domain.basis[:, 0]
    tau = np.linspace(-2 * np.pi, 2 * np.pi, 41)
    trace = clock_trace(cfg, phi, 0.0, tau)
    e12 = -1.0  # E_1 - E_2
    exact = (a1 + a2) / 2 + (1.0 / e12) * np.sin(e12 * tau)
    assert np.max(np.abs(trace.expectation - exact)) <= 1e-10
    assert trace.t0 == pytest.approx((a1 + a2) / 2, abs=1e-12)


def test_2d_uncertainty_product_at_lattice_points():
    a1, a2 = 0.3, 0.7
    sol, cfg = clock_2d(a1, a2)
    phi = sol.domain.basis[:, 0]
    period = 2 * np.pi
    trace = clock_trace(cfg, phi, 0.0, np.array([-period, 0.0, period]))
    e12 = -1.0
    expected = 0.5 * np.sqrt(1 + (a1 - a2) ** 2 * e12 ** 2 / 4)
    assert np.max(np.abs(trace.uncertainty_product - expected)) <= 1e-9


def test_2d_product_never_below_floor_on_domain():
    sol, cfg = clock_2d(0.1, 0.4)
    phi = sol.domain.basis[:, 0]
    trace = clock_trace(cfg, phi, 0.0, np.linspace(-0.01, 0.01, 9))
    assert np.min(trace.uncertainty_product) >= 0.5 - 1e-9


def test_passage_and_arrival_slopes():
    sol, cfg = clock_2d()
    tau = np.linspace(-0.01, 0.01, 21)
    plus = clock_trace(cfg, cfg.domain.basis[:, 0], 0.0, tau)
    assert linearity_fit(plus).slope == pytest.approx(1.0, abs=1e-3)

    cfg_minus = clock_from_solution(sol, sign=TIME_OF_ARRIVAL)
    minus = clock_trace(cfg_minus, cfg_minus.domain.basis[:, 0], 0.0, tau)
    assert linearity_fit(minus).slope == pytest.approx(-1.0, abs=1e-3)


def test_slope_at_multiple_base_points():
    sol, cfg = clock_2d()
    tau = np.linspace(-0.01, 0.01, 21)
    period = 2 * np.pi
    for n in (0, 1, 2):
        trace = clock_trace(cfg, cfg.domain.basis[:, 0], n * period, tau)
        assert linearity_fit(trace).slope == pytest.approx(1.0, abs=1e-3)


def test_base_point_not_invariant_rejected():
    sol, cfg = clock_2d()
    with pytest.raises(errors.BasePointNotInvariant):
        clock_trace(cfg, cfg.domain.basis[:, 0], np.pi, np.linspace(-0.01, 0.01, 5))


def test_3d_degenerate_t0():
    a = (0.4, 0.4, 1.1)
    sol = build_degenerate(SpectrumSpec((0.0, 1.0), (2, 1)),
                           PairParams(diag_a=np.array(a)))
    cfg = clock_from_solution(sol)
    trace = clock_trace(cfg, cfg.domain.basis[:, 0], 0.0, np.array([0.0]))
    # block coupling b = 0 here
    assert trace.t0 == pytest.approx((a[0] + a[1] + 2 * a[2]) / 4, abs=1e-12)


def test_window_too_wide_warning():
    sol, cfg = clock_2d()
    trace = clock_trace(cfg, cfg.domain.basis[:, 0], 0.0, np.linspace(-2.0, 2.0, 9))
    with pytest.warns(WindowTooWide):
        linearity_fit(trace)


def test_weak_weyl_relation():
    sol = build_nondegenerate(SpectrumSpec.nondegenerate((0.0, 1.0, 2.0, 3.5)))
    cfg = clock_from_solution(sol)
    rng = np.random.default_rng(3)
    for _ in range(10):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi = psi / np.linalg.norm(psi)
        t = rng.uniform(-5, 5)
        u = evolve(cfg.H, t)
        lhs = cfg.T @ (u @ psi)
        rhs = u @ (cfg.T @ psi + commuting_factor(cfg, t, psi))
        assert np.linalg.norm(lhs - rhs) <= 1e-9


def test_commuting_factor_zero_at_t0():
    sol = build_nondegenerate(SpectrumSpec.nondegenerate((0.0, 1.0, 2.0)))
    cfg = clock_from_solution(sol)
    psi = np.ones(3) / np.sqrt(3)
    assert np.linalg.norm(commuting_factor(cfg, 0.0, psi)) <= 1e-14


def test_commuting_factor_derivative_on_domain():
    sol = build_nondegenerate(SpectrumSpec.nondegenerate((0.0, 1.0, 2.0, 3.5)))
    cfg = clock_from_solution(sol)
    phi = sol.domain.basis[:, 1]
    h = 1e-4
    assert np.linalg.norm(commuting_factor(cfg, h, phi) / h - phi) <= 1e-3


def test_commuting_factor_rejects_degenerate_generator():
    sol = build_degenerate(SpectrumSpec((0.0, 1.0), (2, 1)))
    cfg = clock_from_solution(sol)
    with pytest.raises(errors.DegenerateHamiltonian):
        commuting_factor(cfg, 0.5, np.array([1.0, 0.0, 0.0]))


def test_quadratic_residual_scaling_about_offset_center():
    # the linear-fit residual of a window centered where the curvature is
    # nonzero scales as the square of the half-width
    sol, cfg = clock_2d()
    phi = cfg.domain.basis[:, 0]
    center = 0.3
    widths = (0.02, 0.01)
    residuals = []
    for w in widths:
        tau = center + np.linspace(-w, w, 41)
        trace = clock_trace(cfg, phi, 0.0, tau)
        residuals.append(linearity_fit(trace).max_residual)
    ratio = residuals[0] / residuals[1]
    assert ratio == pytest.approx(4.0, rel=0.2)
