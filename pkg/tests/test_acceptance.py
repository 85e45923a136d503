"""Acceptance criteria 1-10.

Each check returns ``(passed, detail)`` and prints one line
``[PASS|FAIL] criterion N: <title> -- <detail>``. Run with ``pytest -v -s``
or directly as ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import mpmath
import numpy as np
import pytest

from stabtherm.critical import exponents, find_tchimax
from stabtherm.exact import energy_gap
from stabtherm.montecarlo import McConfig, run_wolff, spawn_seeds
from stabtherm.pauli import build_canonical_hamiltonian, build_graph_hamiltonian
from stabtherm.structures import Kind, StructureSpec, build_structure
from stabtherm.thermo import closed_form_logs, closed_form_point, polarizations
from stabtherm.verify import (
    canonical_transform_ok,
    distance_mismatches,
    oracle_errors,
    tree_transform_ok,
)

TREE_KINDS = (Kind.S1, Kind.S2, Kind.S3, Kind.S4)
MC_SEED = 2026


REPORT_LINES = []  # replayed in the terminal summary, see conftest.py


def report(n, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {n}: {title} -- {detail}"
    REPORT_LINES.append(line)
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return line


def rel(a, b):
    return abs(a - b) / abs(b)


# -- checks ----------------------------------------------------------------


def check_1():
    t0 = time.perf_counter()
    errs = oracle_errors()
    dt = time.perf_counter() - t0
    worst = max(e for *_, e in errs)
    return worst <= 1e-9 and dt < 10, f"{len(errs)} points, max rel err {worst:.2e}, {dt:.2f}s"


def check_2():
    tree = [tree_transform_ok(StructureSpec(kind, k)) for kind in TREE_KINDS for k in range(7)]
    canon = [canonical_transform_ok(k) for k in range(1, 5)]
    return all(tree) and all(canon), (
        f"{sum(tree)}/{len(tree)} tree images (k<=6), {sum(canon)}/{len(canon)} canonical (k<=4)"
    )


def check_3():
    t0 = time.perf_counter()
    pairs = bad = root_bad = 0
    for k in (1, 2, 3):
        p, b, r = distance_mismatches(k)
        pairs, bad, root_bad = pairs + p, bad + b, root_bad + r
    dt = time.perf_counter() - t0
    ok = bad == 0 and root_bad == 0 and dt < 5
    return ok, f"{pairs} pairs over k<=3 (351 at k=3), {bad} pair and {root_bad} root mismatches, {dt:.2f}s"


def check_4():
    t0 = time.perf_counter()
    vals = {
        "line N=3": (find_tchimax(StructureSpec(Kind.LINE, size=3)).t_star, 1.07),
        "line N=3^6": (find_tchimax(StructureSpec(Kind.LINE, size=3**6)).t_star, 0.29),
        "S1 k=313": (find_tchimax(StructureSpec(Kind.S1, 313)).t_star, 0.29),
    }
    dt = time.perf_counter() - t0
    ok = all(abs(v - ref) <= 0.01 for v, ref in vals.values()) and dt < 5
    return ok, ", ".join(f"{k} {v:.4f}" for k, (v, _) in vals.items()) + f", {dt:.2f}s"


def check_5():
    t = {kind: find_tchimax(StructureSpec(kind, 4)).t_star
         for kind in (Kind.S1, Kind.S2, Kind.S3, Kind.S4, Kind.CANONICAL)}
    line = find_tchimax(StructureSpec(Kind.LINE, size=3**4)).t_star
    ok = t[Kind.S3] > t[Kind.S4] and t[Kind.S2] > t[Kind.S1] and t[Kind.S1] > t[Kind.CANONICAL] > line
    detail = (f"S3 {t[Kind.S3]:.4f} > S4 {t[Kind.S4]:.4f}; S2 {t[Kind.S2]:.4f} > S1 {t[Kind.S1]:.4f}; "
              f"S1 > canonical {t[Kind.CANONICAL]:.4f} > line {line:.4f}")
    return ok, detail


def check_6():
    t0 = time.perf_counter()
    points = [(k, T) for k in (3, 4) for T in (0.8, 1.0, 1.3)]
    seeds = spawn_seeds(MC_SEED, len(points))
    parts = []
    agree = precise = True
    for (k, T), seed in zip(points, seeds):
        spec = StructureSpec(Kind.S3, k)
        est = run_wolff(build_structure(spec), T, McConfig(n_samples=50_000, seed=seed))
        ref = closed_form_point(spec, T).chi
        z = (est.chi - ref) / est.se_chi
        r = est.se_chi / est.chi
        agree &= abs(z) <= 3
        precise &= r <= 0.02
        parts.append(f"k={k} T={T}: z={z:+.2f} SE/chi={100 * r:.2f}%")
    dt = time.perf_counter() - t0
    return agree and precise, (
        f"within 3 SE: {agree}; SE/chi <= 2%: {precise}; " + "; ".join(parts) + f"; {dt:.1f}s"
    )


def check_7():
    s1 = [energy_gap(build_graph_hamiltonian(build_structure(StructureSpec(Kind.S1, k)))) for k in (1, 2, 3)]
    can = [energy_gap(build_canonical_hamiltonian(k)) for k in (1, 2)]
    return s1 == [2, 2, 2] and can == [2, 4], f"S1 k=1..3 gaps {s1}, canonical k=1..2 gaps {can}"


def check_8():
    # values such as chi ~ exp(9000) at k = 1e4 are not representable as
    # doubles; finiteness and positivity are required of the log fields,
    # the linear fields may saturate to 0 or inf but never become NaN
    temps = np.geomspace(0.05, 10, 25)
    bad = []
    count = saturated = 0
    for kind in (*TREE_KINDS, Kind.CANONICAL):
        for k in (1, 10, 100, 1000, 10**4):
            for T in temps:
                p = closed_form_point(StructureSpec(kind, k), T)
                logs = (p.log_m_rel, p.log_m2, p.log_chi, p.log_m0, p.energy_per_spin)
                lin = (p.m_rel, p.m2, p.m0, p.chi, p.energy)
                count += 1
                if not all(math.isfinite(v) for v in logs) or any(math.isnan(v) for v in lin) \
                        or p.energy_per_spin >= 0:
                    bad.append((kind.value, k, T))
                saturated += not all(math.isfinite(v) and v != 0 for v in lin)
    line_ok = True
    for T in temps:
        prev = -math.inf
        for j in range(1, 41):
            lm, lm2, lchi, e = closed_form_logs(StructureSpec(Kind.LINE, size=3**j), T)
            count += 1
            if not all(math.isfinite(v) for v in (lm, lm2, lchi, e)) or lm < prev - 1e-12:
                line_ok = False
            prev = lm
    # deepest line against a direct high-precision evaluation
    n, T = 3**40, 0.5
    with mpmath.workdps(60):
        x = mpmath.tanh(1 / mpmath.mpf(T))
        g = (1 - x**n) / (1 - x)
        m2 = 2 * (n - x * g) / (1 - x) - n
        ref_lchi = float(mpmath.log((m2 - g * g) / (n * T)))
    lchi = closed_form_logs(StructureSpec(Kind.LINE, size=n), T)[2]
    line_ok &= abs(lchi - ref_lchi) <= 1e-12 * abs(ref_lchi)
    ok = not bad and line_ok
    return ok, (f"{count} points with finite logs and no NaN ({len(bad)} bad; {saturated} with linear "
                f"fields beyond double range), line to N=3^40 stable: {line_ok}")


def check_9():
    worst = {"power law": 0.0, "m0": 0.0, "recursion": 0.0}
    exact_sum = True
    for kind in (Kind.S1, Kind.S3):
        for T in (0.3, 0.7, 1.0, 2.0, 5.0):
            for k in range(1, 21):
                spec = StructureSpec(kind, k)
                e = exponents(spec, T)
                p = closed_form_point(spec, T)
                n = 3**k
                exact_sum &= e.gamma_nu + 2 * e.beta_nu == 1.0
                worst["power law"] = max(worst["power law"], rel(e.A_exact * n ** e.gamma_nu, p.chi))
                worst["m0"] = max(worst["m0"], rel(n ** (-e.beta_nu), p.m0))
    for T in (0.3, 0.7, 1.0, 2.0, 5.0):
        pol = polarizations(T)
        for kind, p in ((Kind.S1, pol.epsilon), (Kind.S3, pol.alpha)):
            b = 2 * (1 - p * p) if kind is Kind.S1 else 2 * (1 - p) * (1 + 2 * p)
            prev = closed_form_point(StructureSpec(kind, 0), T).m2
            for k in range(1, 31):
                cur = closed_form_point(StructureSpec(kind, k), T).m2
                worst["recursion"] = max(worst["recursion"], rel(cur, (1 + 2 * p) ** 2 * prev + b * 3 ** (k - 1)))
                prev = cur
        e = mpmath.tanh(1 / mpmath.mpf(T))
        zeta = (2 + e) * e
        m, m2 = mpmath.mpf(1), mpmath.mpf(1)
        for k in range(1, 31):
            m += 2 * (2 + e) ** (k - 1) * e ** (3 * k - 2)
            m2 = 3 * m2 + 2 * zeta ** (2 * k - 1)
            cf = closed_form_point(StructureSpec(Kind.CANONICAL, k), T)
            worst["recursion"] = max(worst["recursion"], rel(cf.m_rel, float(m)), rel(cf.m2, float(m2)))
    ok = (worst["power law"] <= 1e-10 and worst["m0"] <= 1e-12 and worst["recursion"] <= 1e-10 and exact_sum)
    return ok, (f"power law {worst['power law']:.1e}, m0 {worst['m0']:.1e}, "
                f"recursions {worst['recursion']:.1e}, gamma/nu + 2 beta/nu == 1 exactly: {exact_sum}")


def check_10():
    log_m0 = [closed_form_point(StructureSpec(Kind.S1, k), 0.5).log_m0 for k in range(1, 5000)]
    strict = all(b < a for a, b in zip(log_m0, log_m0[1:]))
    k_below = next((k for k, v in enumerate(log_m0, start=1) if v < math.log(1e-6)), None)
    return strict and k_below is not None, f"strictly decreasing for k<5000: {strict}; m0 < 1e-6 from k={k_below}"


CRITERIA = [
    (1, "oracle equivalence", check_1),
    (2, "transform structure", check_2),
    (3, "effective-distance formula", check_3),
    (4, "reported T_chimax values", check_4),
    (5, "t_star ordering at k=4", check_5),
    (6, "Monte Carlo agreement (S3)", check_6),
    (7, "spectral gaps", check_7),
    (8, "numerical robustness", check_8),
    (9, "identity suite", check_9),
    (10, "thermodynamic-limit trend", check_10),
]


@pytest.mark.parametrize("n,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, title, check):
    passed, detail = check()
    line = report(n, title, passed, detail)
    assert passed, line


if __name__ == "__main__":
    results = [(n, title, *check()) for n, title, check in CRITERIA]
    for n, title, passed, detail in results:
        report(n, title, passed, detail)
    sys.exit(0 if all(r[2] for r in results) else 1)
