"""Apparent critical temperatures, shift-law fits and size exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .structures import Kind, StructureSpec
from .thermo import LOG3, log_chi, polarizations

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

T_BRACKET = (1e-3, 10.0)
GRID_POINTS = 200
DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class CriticalPoint:
    spec: StructureSpec
    t_star: float
    chi_star: float
    log_chi_star: float
    unimodal: bool


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Maximizer of a unimodal ``f`` on ``[a, b]`` to within ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def find_tchimax(
    spec: StructureSpec,
    tol: float = DEFAULT_TOL,
    bracket: tuple[float, float] = T_BRACKET,
    grid_points: int = GRID_POINTS,
) -> CriticalPoint:
    """Temperature of maximum susceptibility per spin.

    A logarithmic grid locates the global maximum, golden-section search
    refines it between the neighbouring grid points. ``unimodal`` reports
    whether the grid values rise then fall with no other local maximum.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")

    def f(T: float) -> float:
        return log_chi(spec, T)

    grid = np.geomspace(bracket[0], bracket[1], grid_points)
    vals = np.array([f(T) for T in grid])
    if not np.isfinite(vals).any() or np.ptp(vals[np.isfinite(vals)]) == 0:
        raise ValueError(f"no interior maximum: chi is flat for {spec.label()}")
    i = int(np.argmax(vals))
    if i == 0 or i == grid_points - 1:
        raise ValueError(f"no interior maximum of chi in {bracket} for {spec.label()}")
    diffs = np.diff(vals)
    unimodal = bool(np.all(diffs[:i] >= 0) and np.all(diffs[i:] <= 0))
    t_star = golden_section_max(f, grid[i - 1], grid[i + 1], tol)
    lc = f(t_star)
    return CriticalPoint(spec, t_star, math.exp(lc) if lc < 700 else math.inf, lc, unimodal)


@dataclass(frozen=True)
class ShiftLaw:
    """``t_star = a * k**(-b)``."""

    a: float
    b: float
    residual: float

    def __call__(self, k):
        return self.a * np.asarray(k, dtype=float) ** (-self.b)


def fit_shift_law(points: Sequence[tuple[float, float]]) -> ShiftLaw:
    """Least-squares line through ``(log k, log t_star)``."""
    if len(points) < 3:
        raise ValueError(f"need at least 3 points for the shift-law fit, got {len(points)}")
    k = np.array([p[0] for p in points], dtype=float)
    t = np.array([p[1] for p in points], dtype=float)
    if np.any(t <= 0) or np.any(k <= 0):
        raise ValueError("k and t_star must be positive")
    if np.ptp(k) == 0:
        raise ValueError("degenerate fit: all k are equal")
    A = np.column_stack([np.ones_like(k), -np.log(k)])
    coef, *_ = np.linalg.lstsq(A, np.log(t), rcond=None)
    resid = float(np.linalg.norm(A @ coef - np.log(t)))
    return ShiftLaw(float(np.exp(coef[0])), float(coef[1]), resid)


@dataclass(frozen=True)
class ExponentPoint:
    T: float
    k: int
    psi: float
    beta_nu: float
    gamma_nu: float
    A_exact: float | None = None
    A_approx: float | None = None


def log_psi(kind: Kind, k: int, T: float) -> float:
    """``log(psi)`` with ``m_rel = psi**k``."""
    pol = polarizations(T)
    l1, l3 = pol.log_psi1, pol.log_psi3
    if kind is Kind.S1:
        return l1
    if kind is Kind.S3:
        return l3
    if kind is Kind.S2:
        return l1 + (l3 - l1) / k
    if kind is Kind.S4:
        return l3 + (l1 - l3) / k
    raise ValueError(f"size exponents are defined for s1-s4 only, not {kind.value}")


def _prefactors(kind: Kind, k: int, T: float) -> tuple[float, float]:
    pol = polarizations(T)
    if kind is Kind.S1:
        log_b, lp = pol.log_b1, pol.log_psi1
    else:
        log_b, lp = pol.log_b3, pol.log_psi3
    L = 2.0 * lp - LOG3
    # b / (psi**2 - 3) = b / (3 (r - 1)), r = psi**2 / 3
    half = math.exp(log_b) / (3.0 * math.expm1(L) * T) if L != 0 else math.inf
    if L == 0:
        exact = math.exp(log_b) * k / (3.0 * T)
    else:
        exact = half * -math.expm1(-k * L)
    return exact, half


def exponents(spec: StructureSpec, T: float) -> ExponentPoint:
    kind = spec.kind
    if kind not in (Kind.S1, Kind.S2, Kind.S3, Kind.S4):
        raise ValueError(f"size exponents are defined for s1-s4 only, not {kind.value}")
    k = spec.level
    if k < 1:
        raise ValueError("size exponents need k >= 1")
    lp = log_psi(kind, k, T)
    beta_nu = 1.0 - lp / LOG3
    gamma_nu = 1.0 - 2.0 * beta_nu
    A_exact = A_approx = None
    if kind in (Kind.S1, Kind.S3):
        A_exact, A_approx = _prefactors(kind, k, T)
    return ExponentPoint(T, k, math.exp(lp), beta_nu, gamma_nu, A_exact, A_approx)
