"""Finite-dimensional quantum clocks built from time operators.

A time operator T forms a canonical pair with the generator H on a
domain; near the invariant set of exp(-iHt/hbar) the Heisenberg-picture
expectation of T is linear in the elapsed parameter with slope +1
(passage-time type) or -1 (time-of-arrival type).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import BasePointNotInvariant, ConstraintViolated, DegenerateHamiltonian
from .invariant_sets import check_membership
from .matrix_core import Subspace, commutator, eigh, evolve, frobenius, require_hermitian
from .pair_builder import CanonicalSolution
from .uncertainty import expectation, uncertainty

PASSAGE_TIME = +1
TIME_OF_ARRIVAL = -1


class WindowTooWide(UserWarning):
    pass


@dataclass(frozen=True)
class ClockConfig:
    H: np.ndarray
    T: np.ndarray
    domain: Subspace
    sign: int = PASSAGE_TIME
    hbar: float = 1.0

    def __post_init__(self):
        if self.sign not in (PASSAGE_TIME, TIME_OF_ARRIVAL):
            raise ValueError("sign must be +1 (passage time) or -1 (time of arrival)")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        h = require_hermitian(self.H)
        t = require_hermitian(self.T)
        object.__setattr__(self, "H", h)
        object.__setattr__(self, "T", t)
        if self.domain.dim == 0:
            raise ConstraintViolated("clock domain is empty")
        c = commutator(t, h)
        resid = c @ self.domain.basis - (self.sign * 1j * self.hbar) * self.domain.basis
        worst = float(np.max(np.linalg.norm(resid, axis=0)))
        allowed = DEFAULT_TOL.ccr_tol * max(frobenius(t) * frobenius(h), 1.0)
        if worst > allowed:
            raise ConstraintViolated(
                f"[T, H] - {self.sign:+d}*i*hbar fails on the domain (residual {worst:.3e})")

    @property
    def h_norm(self) -> float:
        return float(np.linalg.norm(self.H, 2))


def clock_from_solution(sol: CanonicalSolution, h=None, sign: int = PASSAGE_TIME,
                        tol: ToleranceConfig = DEFAULT_TOL) -> ClockConfig:
    """Interpret a canonical solution as a clock: T = A, H = B by default.

    For the time-of-arrival sign the domain is the eigenspace of [A, B]
    at -i*hbar instead of the solution's own domain.
    """
    from .matrix_core import eigenspace

    h = sol.B if h is None else np.asarray(h, dtype=complex)
    domain = sol.domain
    if sign == TIME_OF_ARRIVAL:
        c = commutator(sol.A, h)
        domain = eigenspace(c, -1j * sol.hbar, 100 * tol.spectral_tol, tol)
        if domain.dim == 0:
            raise ConstraintViolated("no -i*hbar eigenspace: pair has no arrival-type domain")
    return ClockConfig(h, sol.A, domain, sign, sol.hbar)


def heisenberg_T(cfg: ClockConfig, t: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """T(t) = exp(iHt/hbar) T exp(-iHt/hbar)."""
    u = evolve(cfg.H, t, cfg.hbar, tol)
    return u.conj().T @ cfg.T @ u


@dataclass(frozen=True)
class ClockTrace:
    tau_grid: np.ndarray
    expectation: np.ndarray
    delta_T: np.ndarray
    delta_H: np.ndarray
    uncertainty_product: np.ndarray
    t0: float
    base_point: float
    h_norm: float = 0.0
    hbar: float = 1.0


def clock_trace(cfg: ClockConfig, phi, base_point: float, tau_grid,
                tol: ToleranceConfig = DEFAULT_TOL) -> ClockTrace:
    """Expectation and uncertainty product of T(base_point + tau) on phi.

    The base point must belong to the invariant set of exp(-iHt/hbar)
    (checked by evolving the domain), and phi must be a unit domain state.
    """
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    base_sol = CanonicalSolution(cfg.T, cfg.H, cfg.sign * 1j * cfg.hbar,
                                 cfg.domain, "clock", cfg.hbar)
    member, resid = check_membership(base_sol, cfg.H, base_point, cfg.hbar, tol)
    if not member:
        raise BasePointNotInvariant(
            f"t = {base_point} leaves the domain (residual {resid:.3e})")
    tau_grid = np.asarray(tau_grid, dtype=float).reshape(-1)
    dh = uncertainty(cfg.H, phi, tol)
    exps = np.empty_like(tau_grid)
    dts = np.empty_like(tau_grid)
    for k, tau in enumerate(tau_grid):
        tt = heisenberg_T(cfg, base_point + tau, tol)
        exps[k] = expectation(tt, phi)
        dts[k] = uncertainty(tt, phi, tol)
    t0 = expectation(heisenberg_T(cfg, base_point, tol), phi)
    return ClockTrace(tau_grid, exps, dts, np.full_like(tau_grid, dh), dts * dh,
                      t0, base_point, cfg.h_norm, cfg.hbar)


@dataclass(frozen=True)
class LinearityFit:
    slope: float
    intercept: float
    max_residual: float
    quadratic_bound: float  # max |residual| / tau^2 over nonzero tau


def linearity_fit(trace: ClockTrace) -> LinearityFit:
    """Least-squares line through the trace; residuals quantify the O(tau^2) term."""
    tau = trace.tau_grid
    if trace.h_norm > 0:
        width = float(np.max(np.abs(tau))) * trace.h_norm / trace.hbar
        if width > 0.5:
            warnings.warn(f"window {width:.3g} in units of hbar/||H|| is too wide "
                          "for a linear-regime fit", WindowTooWide)
    slope, intercept = np.polyfit(tau, trace.expectation, 1)
    resid = trace.expectation - (intercept + slope * tau)
    nonzero = np.abs(tau) > 0
    qb = float(np.max(np.abs(resid[nonzero]) / tau[nonzero] ** 2)) if nonzero.any() else 0.0
    return LinearityFit(float(slope), float(intercept), float(np.max(np.abs(resid))), qb)


def commuting_factor_matrix(cfg: ClockConfig, t: float,
                            tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """K(t) of the generalized weak Weyl relation T U(t) = U(t)(T + K(t)).

    Requires a nondegenerate generator; in its eigenbasis
    K_ss' = i*hbar/(E_s - E_s') (exp(i(E_s - E_s')t/hbar) - 1) off the
    diagonal and zero on it.
    """
    sd = eigh(cfg.H, tol)
    if any(len(cl) > 1 for cl in sd.clusters):
        raise DegenerateHamiltonian("the commuting-factor formula needs distinct eigenvalues")
    e = sd.eigenvalues
    diff = e[:, None] - e[None, :]
    np.fill_diagonal(diff, 1.0)
    k = 1j * cfg.hbar / diff * (np.exp(1j * diff * t / cfg.hbar) - 1.0)
    np.fill_diagonal(k, 0.0)
    v = sd.eigenvectors
    return v @ k @ v.conj().T


def commuting_factor(cfg: ClockConfig, t: float, psi,
                     tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """K(t) applied to an arbitrary state (T's domain is the whole space)."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return commuting_factor_matrix(cfg, t, tol) @ psi
