"""Self-check suites run by ``stabtherm verify``.

Each suite compares two independent routes to the same quantity and returns
a :class:`SuiteResult`; none of them samples, so the outcome is deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

from .exact import energy_gap, exact_thermo
from .pauli import (
    ZString,
    all_labels,
    build_canonical_hamiltonian,
    build_graph_hamiltonian,
    canonical_disentangler,
    canonical_image_label,
    effective_distance,
    root_distance,
    symbolic_distances,
    transform_hamiltonian,
    transform_operator,
    tree_disentangler,
    trit_index,
)
from .structures import Kind, StructureSpec, build_structure
from .thermo import closed_form_logs, closed_form_point, path_thermo

ORACLE_TEMPS = (0.4, 0.8, 1.0, 1.5, 2.5, 5.0)
TREE_KINDS = (Kind.S1, Kind.S2, Kind.S3, Kind.S4)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checks: int
    detail: str
    seconds: float = 0.0


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def hamiltonian_for(spec: StructureSpec):
    if spec.kind is Kind.CANONICAL:
        return build_canonical_hamiltonian(spec.level)
    return build_graph_hamiltonian(build_structure(spec))


def oracle_specs() -> list[StructureSpec]:
    specs = [StructureSpec(kind, k) for kind in (*TREE_KINDS, Kind.CANONICAL) for k in (1, 2)]
    specs += [StructureSpec(kind, size=n) for kind in (Kind.LINE, Kind.STAR) for n in (3, 9)]
    return specs


def oracle_errors(temps=ORACLE_TEMPS) -> list[tuple[StructureSpec, float, float]]:
    """Worst relative error over (m_rel, m2, chi, energy) per (structure, T)."""
    out = []
    for spec in oracle_specs():
        ham = hamiltonian_for(spec)
        for T in temps:
            ex = exact_thermo(ham, T)
            cf = closed_form_point(spec, T)
            err = max(_rel(cf.m_rel, ex.m_rel), _rel(cf.m2, ex.m2), _rel(cf.chi, ex.chi),
                      _rel(cf.energy, ex.energy))
            out.append((spec, T, err))
    return out


def suite_oracle(tol: float = 1e-9) -> SuiteResult:
    errs = oracle_errors()
    worst = max(e for *_, e in errs)
    return SuiteResult("oracle-vs-closed-form", worst <= tol, len(errs), f"max rel err {worst:.2e}")


def tree_transform_ok(spec: StructureSpec) -> bool:
    """Disentangled tree: N-1 singletons plus one pair per sibling bond, root free."""
    graph = build_structure(spec)
    ham = transform_hamiltonian(build_graph_hamiltonian(graph), tree_disentangler(graph))
    singles = sorted(t.support[0] for t in ham.terms if t.weight == 1)
    pairs = sorted(t.support for t in ham.terms if t.weight == 2)
    return (
        singles == list(range(1, graph.num_spins))
        and pairs == sorted(graph.sibling_edges)
        and len(ham.terms) == len(singles) + len(pairs)
    )


def canonical_transform_ok(k: int) -> bool:
    """Canonical terms map to distinct singletons and the logical Z to the root."""
    circuit = canonical_disentangler(k)
    ham = build_canonical_hamiltonian(k)
    images = transform_hamiltonian(ham, circuit).terms
    if any(t.weight != 1 for t in images):
        return False
    sites = [t.support[0] for t in images]
    if len(set(sites)) != 3**k - 1 or 0 in sites:
        return False
    logical = transform_operator(ZString.from_support(range(3**k)), circuit)
    return logical == ZString.of(0)


def canonical_labels_ok(k: int) -> bool:
    from .pauli import canonical_term_labels

    images = transform_hamiltonian(build_canonical_hamiltonian(k), canonical_disentangler(k)).terms
    labels = canonical_term_labels(k)
    return all(
        t.support == (trit_index(canonical_image_label(lab, k)),) for t, lab in zip(images, labels)
    )


def suite_transform(max_tree_k: int = 4, max_canonical_k: int = 3) -> SuiteResult:
    checks = 0
    ok = True
    for kind in TREE_KINDS:
        for k in range(max_tree_k + 1):
            ok &= tree_transform_ok(StructureSpec(kind, k))
            checks += 1
    for k in range(1, max_canonical_k + 1):
        ok &= canonical_transform_ok(k) and canonical_labels_ok(k)
        checks += 1
    return SuiteResult("disentangler-structure", ok, checks, "tree and canonical images")


def distance_mismatches(k: int) -> tuple[int, int, int]:
    """(pairs checked, pair mismatches, root-formula mismatches) at level k."""
    labels = all_labels(k)
    sym = symbolic_distances(k)
    n = len(labels)
    pairs = bad = 0
    for a in range(n):
        for b in range(a + 1, n):
            pairs += 1
            bad += effective_distance(labels[a], labels[b], k) != sym[a][b]
    root_bad = sum(root_distance(labels[a], k) != sym[0][a] for a in range(n))
    return pairs, bad, root_bad


def suite_distance(max_k: int = 3) -> SuiteResult:
    total = bad = root_bad = 0
    for k in range(1, max_k + 1):
        p, b, r = distance_mismatches(k)
        total, bad, root_bad = total + p, bad + b, root_bad + r
    return SuiteResult(
        "effective-distance", bad == 0 and root_bad == 0, total,
        f"{bad} pair and {root_bad} root mismatches",
    )


def suite_paths(max_k: int = 3, temps=(0.3, 1.0, 5.0), tol: float = 1e-10) -> SuiteResult:
    worst = 0.0
    checks = 0
    for kind in TREE_KINDS:
        for k in range(max_k + 1):
            spec = StructureSpec(kind, k)
            graph = build_structure(spec)
            for T in temps:
                m_rel, m2 = path_thermo(graph, T)
                cf = closed_form_point(spec, T)
                worst = max(worst, _rel(m_rel, cf.m_rel), _rel(m2, cf.m2))
                checks += 1
    return SuiteResult("path-sums-vs-closed-form", worst <= tol, checks, f"max rel err {worst:.2e}")


def suite_gap() -> SuiteResult:
    ok = all(energy_gap(hamiltonian_for(StructureSpec(Kind.S1, k))) == 2 for k in (1, 2, 3))
    ok &= all(energy_gap(hamiltonian_for(StructureSpec(Kind.CANONICAL, k))) == 2 * k for k in (1, 2))
    return SuiteResult("energy-gap", ok, 5, "S1 gap 2, canonical gap 2k")


def suite_robustness() -> SuiteResult:
    checks = 0
    ok = True
    specs = [StructureSpec(kind, 10**4) for kind in (*TREE_KINDS, Kind.CANONICAL)]
    specs += [StructureSpec(Kind.LINE, size=3**40), StructureSpec(Kind.STAR, size=3**40)]
    for spec in specs:
        for T in (0.05, 0.5, 1.0, 10.0):
            vals = closed_form_logs(spec, T)
            ok &= all(math.isfinite(v) for v in vals)
            checks += 1
    return SuiteResult("large-size-stability", ok, checks, "finite logs at k=1e4 and N=3^40")


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "oracle": suite_oracle,
    "transform": suite_transform,
    "distance": suite_distance,
    "paths": suite_paths,
    "gap": suite_gap,
    "robustness": suite_robustness,
}


def run_all(names=None) -> list[SuiteResult]:
    results = []
    for name in names or SUITES:
        t0 = time.perf_counter()
        try:
            res = SUITES[name]()
        except Exception as exc:  # a crash is a failed suite, not a crashed run
            res = SuiteResult(name, False, 0, f"error: {exc}")
        results.append(SuiteResult(res.name, res.passed, res.checks, res.detail,
                                   time.perf_counter() - t0))
    return results
