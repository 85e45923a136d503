"""Monte Carlo estimators: Wolff clusters for two-body graphs, Metropolis otherwise.

Both samplers draw uniforms from a PCG64 stream into a buffer that the
kernels consume, so a run is a pure function of its inputs and seed and the
compiled and pure-Python backends yield identical chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .pauli import ZHamiltonian, build_graph_hamiltonian
from .structures import SpinGraph
from .thermo import ThermoPoint

BUFFER_SIZE = 1 << 18


@dataclass(frozen=True)
class McConfig:
    """Sampling protocol.

    Parameters
    ----------
    n_samples : int
        Recorded configurations.
    equilibration : int
        Cluster updates (Wolff) or sweeps (Metropolis) discarded first.
    interval : int
        Updates or sweeps between records.
    seed : int
        Seed of the PCG64 stream; fully determines the output.
    n_batches : int
        Batches for the batch-means standard errors.
    backend : str, optional
        ``"cython"`` or ``"python"``; default is the active backend.
    """

    n_samples: int = 50_000
    equilibration: int = 1_000
    interval: int = 1
    seed: int = 0
    n_batches: int = 50
    backend: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.equilibration < 0:
            raise ValueError(f"equilibration must be >= 0, got {self.equilibration}")
        if self.interval < 1:
            raise ValueError(f"interval must be >= 1, got {self.interval}")
        if not 2 <= self.n_batches <= self.n_samples:
            raise ValueError(f"n_batches must lie in [2, n_samples], got {self.n_batches}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def spawn_seeds(seed: int, n: int) -> list[int]:
    """Independent 64-bit child seeds, one per chain."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def _check_T(T: float) -> None:
    if not T > 0 or not math.isfinite(T):
        raise ValueError(f"temperature must be positive and finite, got {T}")


class _Stream:
    """Uniform buffer refilled from a PCG64 generator."""

    def __init__(self, rng: np.random.Generator, min_size: int):
        self.rng = rng
        self.size = max(BUFFER_SIZE, 4 * min_size)
        self.buf = rng.random(self.size)
        self.pos = 0

    def refill(self) -> None:
        rest = self.buf[self.pos:]
        self.buf = np.concatenate([rest, self.rng.random(self.size - len(rest))])
        self.pos = 0


def _drive(step, n_spins: int, n_records: int, interval: int, stream: _Stream):
    mag = np.empty(n_records, dtype=np.int64)
    s0 = np.empty(n_records, dtype=np.int8)
    energy = np.empty(n_records, dtype=np.int64)
    done = 0
    while done < n_records:
        got, stream.pos = step(stream.buf, stream.pos, done, n_records - done, interval, mag, s0, energy)
        done += got
        if done < n_records:
            stream.refill()
    return mag, s0, energy


def _batch_se(x: np.ndarray, n_batches: int) -> float:
    means = np.array([b.mean() for b in np.array_split(x, n_batches)])
    return float(means.std(ddof=1) / math.sqrt(n_batches))


def _estimate(mag, s0, energy, n: int, T: float, n_batches: int) -> ThermoPoint:
    m_rel_s = (s0.astype(np.int64) * mag).astype(float)
    e_s = energy.astype(float)
    m_rel = float(m_rel_s.mean())
    var = float(np.mean((m_rel_s - m_rel) ** 2))
    m2 = var + m_rel**2
    chi = var / (n * T)
    e = float(e_s.mean())

    # jackknife over batches for chi
    batches = np.array_split(np.arange(len(m_rel_s)), n_batches)
    sums = np.array([m_rel_s[b].sum() for b in batches])
    sq = np.array([(m_rel_s[b] ** 2).sum() for b in batches])
    counts = np.array([len(b) for b in batches], dtype=float)
    c_rest = counts.sum() - counts
    mean_rest = (sums.sum() - sums) / c_rest
    chi_rest = ((sq.sum() - sq) / c_rest - mean_rest**2) / (n * T)
    se_chi = float(math.sqrt((n_batches - 1) / n_batches * np.sum((chi_rest - chi_rest.mean()) ** 2)))

    m2_s = m_rel_s**2
    return ThermoPoint.from_values(
        T,
        n,
        m_rel,
        m2,
        chi,
        e,
        se_m_rel=_batch_se(m_rel_s, n_batches),
        se_m2=_batch_se(m2_s, n_batches),
        se_chi=se_chi,
        se_energy=_batch_se(e_s, n_batches),
    )


def _two_body_edges(target: SpinGraph | ZHamiltonian) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(target, SpinGraph):
        return target.num_spins, list(target.edges())
    edges = []
    for term in target.terms:
        if term.weight != 2:
            raise ValueError(
                f"Wolff clusters need two-body terms, got {term!r}; use run_metropolis"
            )
        edges.append(term.support)
    return target.num_spins, edges


def _csr(n: int, lists: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(n + 1, dtype=np.intc)
    ptr[1:] = np.cumsum([len(x) for x in lists])
    idx = np.array([v for x in lists for v in x], dtype=np.intc)
    return ptr, idx


def run_wolff(target: SpinGraph | ZHamiltonian, T: float, cfg: McConfig = McConfig()) -> ThermoPoint:
    """Wolff cluster estimate of the thermodynamic averages at ``T``.

    Bonds between aligned neighbours join the cluster with probability
    ``1 - exp(-2/T)``. Standard errors come from batch means, with a
    jackknife over batches for ``chi``.
    """
    _check_T(T)
    n, edges = _two_body_edges(target)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    indptr, indices = _csr(n, nbrs)
    eu = np.array([e[0] for e in edges], dtype=np.intc)
    ev = np.array([e[1] for e in edges], dtype=np.intc)
    p_add = -math.expm1(-2.0 / T)
    impl = kernels.get_backend(cfg.backend)

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    spins = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
    stream = _Stream(rng, (1 + len(indices)) * cfg.interval)

    def step(buf, pos, rec, count, interval, mag, s0, energy):
        return impl.wolff_sample(spins, indptr, indices, eu, ev, p_add, buf, pos,
                                 rec, count, interval, mag, s0, energy)

    if cfg.equilibration:
        _drive(step, n, cfg.equilibration, 1, stream)
    mag, s0, energy = _drive(step, n, cfg.n_samples, cfg.interval, stream)
    return _estimate(mag, s0, energy, n, T, cfg.n_batches)


def run_metropolis(ham: ZHamiltonian, T: float, cfg: McConfig = McConfig()) -> ThermoPoint:
    """Single-spin-flip Metropolis estimate for an arbitrary Z-string Hamiltonian.

    Sites are visited sequentially; a flip costing ``dE`` is accepted with
    probability ``min(1, exp(-dE/T))``.
    """
    _check_T(T)
    if isinstance(ham, SpinGraph):
        ham = build_graph_hamiltonian(ham)
    n = ham.num_spins
    per_site: list[list[int]] = [[] for _ in range(n)]
    for t, term in enumerate(ham.terms):
        for s in term.support:
            per_site[s].append(t)
    site_ptr, site_terms = _csr(n, per_site)
    fmax = max((len(x) for x in per_site), default=0)
    accept = np.exp(-2.0 * np.arange(fmax + 1) / T)
    impl = kernels.get_backend(cfg.backend)

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    spins = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
    term_val = np.array(
        [int(np.prod(spins[list(t.support)], dtype=np.int64)) for t in ham.terms], dtype=np.int8
    )
    stream = _Stream(rng, n * cfg.interval)

    def step(buf, pos, rec, count, interval, mag, s0, energy):
        return impl.metropolis_sample(spins, term_val, site_ptr, site_terms, accept, buf, pos,
                                      rec, count, interval, mag, s0, energy)

    if cfg.equilibration:
        _drive(step, n, cfg.equilibration, 1, stream)
    mag, s0, energy = _drive(step, n, cfg.n_samples, cfg.interval, stream)
    return _estimate(mag, s0, energy, n, T, cfg.n_batches)
