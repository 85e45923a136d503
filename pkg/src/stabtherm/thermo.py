"""Closed-form thermodynamics of the memory structures.

Units: J = k_B = 1, temperature in J/k_B.

Large systems are handled in log space. ``3**k`` for k in the thousands is
far outside double range, so every closed form first produces the logarithms
of the relative magnetization, the squared magnetization and the per-spin
susceptibility; the linear values are derived from those (and may saturate
to ``inf`` while the logs stay finite). The line and the canonical
stabilizer have susceptibilities that are a difference of nearly equal
terms at low temperature; they are evaluated with mpmath at a working
precision that covers the cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np

from .structures import Kind, SpinGraph, StructureSpec

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
LOG4 = math.log(4.0)
MAX_PATH_SPINS = 3**7


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _logaddexp(a: float, b: float) -> float:
    return float(np.logaddexp(a, b))


def log_geometric(k: int, log_ratio: float) -> float:
    """``log(sum_{i<k} r**i)`` for ``r = exp(log_ratio)``, stable for any k.

    Near ``r = 1`` the ratio form is 0/0; a second-order expansion of the
    exact ``sinh`` form is used instead.
    """
    if k <= 0:
        return -math.inf
    L = log_ratio
    if L == -math.inf:
        return 0.0
    if abs(L) < 1e-8:
        return math.log(k) + (k - 1) * L / 2 + (k * k - 1) * L * L / 24
    kL = k * L
    if L > 0:
        return kL + math.log(-math.expm1(-kL)) - (L + math.log(-math.expm1(-L)))
    return math.log(-math.expm1(kL)) - math.log(-math.expm1(L))


@dataclass(frozen=True)
class Polarizations:
    """Single-spin (epsilon) and sibling-pair (alpha) polarizations at T.

    The ``log_*`` fields are computed directly from exponentials of
    ``-1/T`` so that quantities like ``1 - epsilon`` keep full relative
    precision at low temperature.
    """

    T: float
    epsilon: float
    alpha: float
    logQ1: float
    logQ2: float
    log_epsilon: float
    log_alpha: float
    log_psi1: float  # log(1 + 2 eps)
    log_psi3: float  # log(1 + 2 alpha)
    log_1m_eps2: float  # log(1 - eps^2)
    log_1m_eps: float
    log_1m_alpha: float

    @property
    def log_b1(self) -> float:
        """``log(2 (1 - eps^2))``, the per-leaf variance term of a free spin."""
        return LOG2 + self.log_1m_eps2

    @property
    def log_b3(self) -> float:
        """``log(2 (1 + alpha - 2 alpha^2))`` for a bonded sibling pair."""
        return LOG2 + self.log_1m_alpha + self.log_psi3


def polarizations(T: float) -> Polarizations:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    b = 1.0 / T
    x = math.exp(-2.0 * b)
    y = x * x
    eps = -math.expm1(-2.0 * b) / (1.0 + x)
    alpha = -math.expm1(-4.0 * b) / (1.0 + 3.0 * y)
    log_eps = math.log1p(-x) - math.log1p(x) if x < 1.0 else -math.inf
    log_alpha = math.log1p(-y) - math.log1p(3.0 * y) if y < 1.0 else -math.inf
    return Polarizations(
        T=T,
        epsilon=eps,
        alpha=alpha,
        logQ1=b + math.log1p(x),
        logQ2=3.0 * b + math.log1p(3.0 * y),
        log_epsilon=log_eps,
        log_alpha=log_alpha,
        log_psi1=math.log(3.0 - x) - math.log1p(x),
        log_psi3=math.log(3.0 + y) - math.log1p(3.0 * y),
        log_1m_eps2=LOG4 - 2.0 * b - 2.0 * math.log1p(x),
        log_1m_eps=LOG2 - 2.0 * b - math.log1p(x),
        log_1m_alpha=LOG4 - 4.0 * b - math.log1p(3.0 * y),
    )


@dataclass(frozen=True)
class ThermoPoint:
    """Thermodynamic averages at one temperature.

    ``m_rel`` is the relative magnetization, ``m2`` the squared
    magnetization, ``m0 = m_rel / N``, ``chi`` the susceptibility per spin.
    Standard errors are filled in only by the Monte Carlo estimators.
    """

    T: float
    n_spins: int
    m_rel: float
    m2: float
    m0: float
    chi: float
    energy: float
    log_m_rel: float
    log_m2: float
    log_chi: float
    energy_per_spin: float
    se_m_rel: float | None = None
    se_m2: float | None = None
    se_chi: float | None = None
    se_energy: float | None = None

    @property
    def log_m0(self) -> float:
        return self.log_m_rel - math.log(self.n_spins)

    @classmethod
    def from_logs(cls, T, n, log_m_rel, log_m2, log_chi, energy_per_spin, **se) -> "ThermoPoint":
        log_n = math.log(n)
        return cls(
            T=T,
            n_spins=n,
            m_rel=_exp(log_m_rel),
            m2=_exp(log_m2),
            m0=_exp(log_m_rel - log_n),
            chi=_exp(log_chi),
            energy=energy_per_spin * n if n < 2**1000 else energy_per_spin * _exp(log_n),
            log_m_rel=log_m_rel,
            log_m2=log_m2,
            log_chi=log_chi,
            energy_per_spin=energy_per_spin,
            **se,
        )

    @classmethod
    def from_values(cls, T, n, m_rel, m2, chi, energy, **se) -> "ThermoPoint":
        log_chi = math.log(chi) if chi > 0 else -math.inf
        return cls(
            T=T,
            n_spins=n,
            m_rel=m_rel,
            m2=m2,
            m0=m_rel / n,
            chi=chi,
            energy=energy,
            log_m_rel=math.log(m_rel) if m_rel > 0 else -math.inf,
            log_m2=math.log(m2),
            log_chi=log_chi,
            energy_per_spin=energy / n,
            **se,
        )

    def with_errors(self, **se) -> "ThermoPoint":
        return replace(self, **se)


# -- per-structure log-domain closed forms ---------------------------------


def _log_chi_tree(k: int, log_b: float, log_psi: float, T: float) -> float:
    """Susceptibility per spin of Structure 1 (or 3 with the pair values).

    ``chi = b/(3T) * sum_{i<k} r**i`` with ``r = psi**2 / 3``.
    """
    if k == 0:
        return -math.inf
    return log_b - LOG3 - math.log(T) + log_geometric(k, 2.0 * log_psi - LOG3)


def _log_chi_decorated(k: int, log_core_chi: float, log_psi_outer: float, log_b_outer: float, T: float) -> float:
    """Structures 2 and 4: a level-(k-1) core with one cell appended per node."""
    return _logaddexp(2.0 * log_psi_outer + log_core_chi, log_b_outer - math.log(T)) - LOG3


def _tree_point(kind: Kind, k: int, pol: Polarizations) -> tuple[float, float, float]:
    """(log m_rel, log chi, energy per spin) for Structures 1-4."""
    T = pol.T
    n = 3**k
    e, a = pol.epsilon, pol.alpha
    if k == 0:
        return 0.0, -math.inf, 0.0
    inv_n = 1 / n
    if kind is Kind.S1:
        lm = k * pol.log_psi1
        lchi = _log_chi_tree(k, pol.log_b1, pol.log_psi1, T)
        per_spin = -e * (1 - inv_n)
    elif kind is Kind.S3:
        lm = k * pol.log_psi3
        lchi = _log_chi_tree(k, pol.log_b3, pol.log_psi3, T)
        per_spin = -1.5 * a * (1 - inv_n)
    elif kind is Kind.S2:
        # core of 3**(k-1) nodes, 3**(k-1) - 1 of them free spins; the rest paired
        lm = pol.log_psi3 + (k - 1) * pol.log_psi1
        core_chi = _log_chi_tree(k - 1, pol.log_b1, pol.log_psi1, T)
        lchi = _log_chi_decorated(k, core_chi, pol.log_psi3, pol.log_b3, T)
        per_spin = -(e * (1 / 3 - inv_n) + a)
    else:
        lm = pol.log_psi1 + (k - 1) * pol.log_psi3
        core_chi = _log_chi_tree(k - 1, pol.log_b3, pol.log_psi3, T)
        lchi = _log_chi_decorated(k, core_chi, pol.log_psi1, pol.log_b1, T)
        per_spin = -(2 * e / 3 + 1.5 * a * (1 / 3 - inv_n))
    return lm, lchi, per_spin


def _mp_dps(T: float, cancellations: int, n_digits: int = 0) -> int:
    # each subtraction of nearly equal terms loses log10(1 / (1 - tanh(1/T)))
    # ~ 0.87 / T digits
    return 40 + int(cancellations * 0.9 / T) + n_digits


def _mp_log(x) -> float:
    return float(mpmath.log(x)) if x > 0 else -math.inf


def _line_logs(n: int, T: float) -> tuple[float, float, float]:
    """End-rooted line: (log m_rel, log m2, log chi)."""
    with mpmath.workdps(_mp_dps(T, 3, 2 * len(str(n)))):
        b = mpmath.mpf(1) / mpmath.mpf(T)
        u = mpmath.exp(-2 * b)
        x = (1 - u) / (1 + u)
        ome = 2 * u / (1 + u)
        xn = mpmath.exp(n * mpmath.log(x)) if x > 0 else mpmath.mpf(0)
        g = (1 - xn) / ome
        # sum_{d<N} (N - d) x**d = (N - x g) / (1 - x)
        a = (n - x * g) / ome
        m2 = 2 * a - n
        var = m2 - g * g
        return _mp_log(g), _mp_log(m2), _mp_log(var / (n * mpmath.mpf(T)))


def _canonical_logs(k: int, T: float) -> tuple[float, float, float]:
    with mpmath.workdps(_mp_dps(T, 2, len(str(k)))):
        b = mpmath.mpf(1) / mpmath.mpf(T)
        u = mpmath.exp(-2 * b)
        e = (1 - u) / (1 + u)

        def geom(r):
            return mpmath.mpf(k) if r == 1 else (1 - r**k) / (1 - r)

        m_rel = 1 + 2 * e * geom((2 + e) * e**3)
        zeta = (2 + e) * e
        n = mpmath.mpf(3) ** k
        m2 = n + 2 * n / 3 * zeta * geom(zeta**2 / 3) if k > 0 else n
        var = m2 - m_rel**2
        return _mp_log(m_rel), _mp_log(m2), _mp_log(var / (n * mpmath.mpf(T)))


def closed_form_logs(spec: StructureSpec, T: float) -> tuple[float, float, float, float]:
    """(log m_rel, log m2, log chi, energy per spin) from the closed forms."""
    pol = polarizations(T)
    kind = spec.kind
    n = spec.n_spins
    log_n = math.log(n)
    if kind in (Kind.S1, Kind.S2, Kind.S3, Kind.S4):
        lm, lchi, eps_n = _tree_point(kind, spec.level, pol)
        lm2 = _logaddexp(2.0 * lm, log_n + math.log(T) + lchi)
        return lm, lm2, lchi, eps_n
    if kind is Kind.STAR:
        e = pol.epsilon
        lm = math.log1p((n - 1) * e)
        # variance (N-1)(1 - eps^2)
        lchi = (math.log(n - 1) + pol.log_1m_eps2 - log_n - math.log(T)) if n > 1 else -math.inf
        lm2 = _logaddexp(2.0 * lm, log_n + math.log(T) + lchi)
        return lm, lm2, lchi, -e * (n - 1) / n
    energy = -pol.epsilon * (1 - 1 / n)
    if kind is Kind.LINE:
        return (*_line_logs(n, T), energy)
    return (*_canonical_logs(spec.level, T), energy)


def closed_form_point(spec: StructureSpec, T: float) -> ThermoPoint:
    lm, lm2, lchi, e = closed_form_logs(spec, T)
    return ThermoPoint.from_logs(T, spec.n_spins, lm, lm2, lchi, e)


def log_chi(spec: StructureSpec, T: float) -> float:
    return closed_form_logs(spec, T)[2]


# -- generic path evaluator ------------------------------------------------


def path_matrix(graph: SpinGraph, T: float) -> np.ndarray:
    """``Path(n, l)`` for every node pair.

    Edges inside a sibling triangle carry alpha, all others epsilon; a path
    through a bonded sibling pair takes the shortcut and picks up a single
    alpha for the two siblings.
    """
    n = graph.num_spins
    if n > MAX_PATH_SPINS:
        raise ValueError(f"{n} spins exceeds the path evaluator cap of {MAX_PATH_SPINS}")
    pol = polarizations(T)
    w = [pol.alpha if p >= 0 else pol.epsilon for p in graph.partner]
    order = sorted(range(n), key=lambda v: (graph.depth[v], v))
    P = np.zeros((n, n))
    done = np.zeros(n, dtype=bool)
    for v in order:
        if v == 0:
            P[0, 0] = 1.0
            done[0] = True
            continue
        p = graph.parent[v]
        row = np.where(done, w[v] * P[p], 0.0)
        u = graph.partner[v]
        if u >= 0 and done[u]:
            row[u] = pol.alpha
        row[v] = 1.0
        P[v, :] = row
        P[:, v] = row
        done[v] = True
    return P


def path_value(graph: SpinGraph, T: float, n: int, l: int) -> float:
    """Single ``Path(n, l)`` by walking both nodes up to their common ancestor."""
    pol = polarizations(T)
    w = [pol.alpha if p >= 0 else pol.epsilon for p in graph.partner]
    a, b, val = n, l, 1.0
    while graph.depth[a] > graph.depth[b]:
        val *= w[a]
        a = graph.parent[a]
    while graph.depth[b] > graph.depth[a]:
        val *= w[b]
        b = graph.parent[b]
    while a != b:
        if graph.partner[a] == b:
            return val * pol.alpha
        val *= w[a] * w[b]
        a, b = graph.parent[a], graph.parent[b]
    return val


def path_thermo(graph: SpinGraph, T: float) -> tuple[float, float]:
    """(m_rel, m2) from sums of path products over the graph."""
    P = path_matrix(graph, T)
    return float(P[0].sum()), float(P.sum())
