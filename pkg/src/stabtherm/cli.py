"""Command-line entry point: ``stabtherm <subcommand> ...``.

Every tabular output begins with ``#`` manifest lines (command, parameters,
seeds, version, timestamp) followed by a CSV header and rows. Data rows
depend only on the parameters, so reruns are byte-identical below the
manifest timestamp.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .critical import exponents, find_tchimax, fit_shift_law
from .exact import energy_gap
from .montecarlo import McConfig, run_metropolis, run_wolff, spawn_seeds
from .pauli import build_canonical_hamiltonian, build_graph_hamiltonian, canonical_disentangler
from .pauli import transform_hamiltonian, tree_disentangler
from .structures import HIERARCHICAL, Kind, StructureSpec, build_structure
from .thermo import closed_form_point
from .verify import SUITES, run_all

THREADS_ENV = "STABTHERM_THREADS"
CURVE_HEADER = ["T", "m_rel", "m2", "m0", "chi", "energy"]
MC_EXTRA = ["se_m_rel", "se_chi", "chi_analytic"]


def fmt(x) -> str:
    """Locale-independent decimal with 15 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".15g")


def default_jobs() -> int:
    value = os.environ.get(THREADS_ENV)
    if value is None:
        return 1
    try:
        jobs = int(value)
    except ValueError:
        raise SystemExit(f"error: {THREADS_ENV} must be an integer, got {value!r}")
    return max(1, jobs)


def parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """``map`` over a process pool; results keep input order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def temperatures(tmin: float, tmax: float, points: int, spacing: str) -> list[float]:
    if not 0 < tmin <= tmax:
        raise ValueError(f"need 0 < tmin <= tmax, got tmin={tmin}, tmax={tmax}")
    if points < 1:
        raise ValueError(f"points must be >= 1, got {points}")
    if points == 1:
        return [tmin]
    if spacing == "log":
        return [float(t) for t in np.geomspace(tmin, tmax, points)]
    return [float(t) for t in np.linspace(tmin, tmax, points)]


def make_spec(structure: str, k: int | None = None, n: int | None = None) -> StructureSpec:
    kind = Kind.parse(structure)
    if kind in HIERARCHICAL:
        if k is None:
            raise ValueError(f"{kind.value} needs --k")
        return StructureSpec(kind, level=k)
    if n is None and k is None:
        raise ValueError(f"{kind.value} needs --n or --k")
    return StructureSpec(kind, level=k if n is None else None, size=n)


def hamiltonian(spec: StructureSpec):
    if spec.kind is Kind.CANONICAL:
        return build_canonical_hamiltonian(spec.level)
    return build_graph_hamiltonian(build_structure(spec))


class Writer:
    """Manifest plus CSV rows to stdout or a file."""

    def __init__(self, args: argparse.Namespace, seeds: Iterable[int] = ()):
        self.args = args
        self.seeds = list(seeds)

    def manifest(self) -> list[str]:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out")}
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        return [
            f"# command: {self.args.command}",
            f"# params: {json.dumps(params, sort_keys=True)}",
            f"# seeds: {json.dumps(self.seeds)}",
            f"# version: stabtherm {__version__}",
            f"# timestamp: {stamp}",
        ]

    def emit(self, header: Sequence[str], rows: Iterable[Sequence], trailer: Sequence[str] = ()):
        stream = open(self.args.out, "w", newline="") if self.args.out else sys.stdout
        try:
            for line in self.manifest():
                stream.write(line + "\n")
            w = csv.writer(stream, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(x) for x in row])
            for line in trailer:
                stream.write(line + "\n")
        finally:
            if stream is not sys.stdout:
                stream.close()


# -- subcommands -----------------------------------------------------------


def cmd_curve(args) -> int:
    spec = make_spec(args.structure, args.k, args.n)
    rows = []
    for T in temperatures(args.tmin, args.tmax, args.points, args.spacing):
        p = closed_form_point(spec, T)
        rows.append([T, p.m_rel, p.m2, p.m0, p.chi, p.energy])
    Writer(args).emit(CURVE_HEADER, rows)
    return 0


def _tchimax_task(item):
    spec, tol = item
    return find_tchimax(spec, tol=tol)


def cmd_tchimax(args) -> int:
    kind = Kind.parse(args.structure)
    if args.levels:
        specs = [make_spec(kind.value, k=k) for k in args.levels]
    elif args.sizes:
        if kind in HIERARCHICAL:
            specs = [make_spec(kind.value, k=k) for k in args.sizes]
        else:
            specs = [make_spec(kind.value, n=n) for n in args.sizes]
    else:
        raise ValueError("give --sizes or --levels")
    points = parallel_map(_tchimax_task, [(s, args.tol) for s in specs], args.jobs)
    rows = []
    for s, cp in zip(specs, points):
        rows.append([kind.value, s.level if s.level is not None else "", s.n_spins,
                     cp.t_star, cp.chi_star, cp.log_chi_star, cp.unimodal])
    trailer = []
    if args.fit:
        xs = [s.level if s.level is not None else np.log(s.n_spins) / np.log(3) for s in specs]
        law = fit_shift_law(list(zip(xs, [cp.t_star for cp in points])))
        trailer = [f"# shift-law fit t_star = a * k**(-b): a={fmt(law.a)} b={fmt(law.b)} "
                   f"residual={fmt(law.residual)}"]
    Writer(args).emit(["structure", "k", "n_spins", "t_star", "chi_star", "log_chi_star", "unimodal"],
                      rows, trailer)
    return 0


def _mc_task(item):
    spec, T, cfg = item
    if spec.kind is Kind.CANONICAL:
        est = run_metropolis(hamiltonian(spec), T, cfg)
    else:
        est = run_wolff(build_structure(spec), T, cfg)
    ref = closed_form_point(spec, T)
    return [T, est.m_rel, est.m2, est.m0, est.chi, est.energy, est.se_m_rel, est.se_chi, ref.chi]


def cmd_mc(args) -> int:
    spec = make_spec(args.structure, args.k, args.n)
    temps = args.temps or temperatures(args.tmin, args.tmax, args.points, args.spacing)
    seeds = spawn_seeds(args.seed, len(temps))
    items = [
        (spec, T, McConfig(n_samples=args.samples, equilibration=args.equilibration,
                           interval=args.interval, seed=s, n_batches=args.batches))
        for T, s in zip(temps, seeds)
    ]
    rows = parallel_map(_mc_task, items, args.jobs)
    Writer(args, seeds).emit(CURVE_HEADER + MC_EXTRA, rows)
    return 0


def cmd_verify(args) -> int:
    results = run_all(args.suites or None)
    width = max(len(r.name) for r in results)
    out = sys.stdout
    out.write(f"{'suite':<{width}}  result  checks  time_s  detail\n")
    for r in results:
        out.write(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.checks:>6}  "
                  f"{r.seconds:6.2f}  {r.detail}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} suites passed\n")
    return 0 if failed == 0 else 1


def cmd_transform(args) -> int:
    spec = make_spec(args.structure, args.k, args.n)
    if spec.kind is Kind.CANONICAL:
        ham = build_canonical_hamiltonian(spec.level)
        circuit = canonical_disentangler(spec.level)
    else:
        graph = build_structure(spec)
        ham = build_graph_hamiltonian(graph)
        circuit = tree_disentangler(graph)
    image = transform_hamiltonian(ham, circuit)
    text = "\n".join([
        f"# structure: {spec.label()}",
        f"# spins: {ham.num_spins}",
        f"# hamiltonian ({len(ham)} terms)",
        ham.to_text().rstrip("\n"),
        f"# circuit ({len(circuit)} gates)",
        circuit.to_text().rstrip("\n"),
        f"# transformed hamiltonian ({len(image)} terms)",
        image.to_text().rstrip("\n"),
    ])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def cmd_exponents(args) -> int:
    spec = make_spec(args.structure, args.k)
    rows = []
    for T in temperatures(args.tmin, args.tmax, args.points, args.spacing):
        e = exponents(spec, T)
        rows.append([e.T, e.k, e.psi, e.beta_nu, e.gamma_nu, e.A_exact, e.A_approx])
    Writer(args).emit(["T", "k", "psi", "beta_nu", "gamma_nu", "A_exact", "A_approx"], rows)
    return 0


def cmd_gap(args) -> int:
    spec = make_spec(args.structure, args.k, args.n)
    gap = energy_gap(hamiltonian(spec), mode=args.mode)
    Writer(args).emit(["structure", "k", "n_spins", "mode", "gap"],
                      [[spec.kind.value, spec.level if spec.level is not None else "",
                        spec.n_spins, args.mode, gap]])
    return 0


# -- parser ----------------------------------------------------------------


def _structure_args(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    p.add_argument("--structure", required=True, choices=[k.value for k in Kind])
    p.add_argument("--k", type=int, help="concatenation level (line/star: N = 3**k)")
    if with_n:
        p.add_argument("--n", type=int, help="number of spins for line/star")


def _trange_args(p: argparse.ArgumentParser, tmin: float, tmax: float, points: int, spacing: str):
    p.add_argument("--tmin", type=float, default=tmin)
    p.add_argument("--tmax", type=float, default=tmax)
    p.add_argument("--points", type=int, default=points)
    p.add_argument("--spacing", choices=["linear", "log"], default=spacing)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabtherm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"stabtherm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    p = add("curve", cmd_curve, "closed-form thermodynamics over a temperature range")
    _structure_args(p)
    _trange_args(p, 0.1, 5.0, 50, "linear")

    p = add("tchimax", cmd_tchimax, "temperature of maximum susceptibility")
    p.add_argument("--structure", required=True, choices=[k.value for k in Kind])
    p.add_argument("--sizes", type=int, nargs="+", help="levels k (line/star: spin counts N)")
    p.add_argument("--levels", type=int, nargs="+", help="levels k for any structure")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--fit", action="store_true", help="append a t_star = a k^-b fit")
    p.add_argument("--jobs", type=int, default=default_jobs())

    p = add("mc", cmd_mc, "Monte Carlo estimates with analytic reference")
    _structure_args(p)
    _trange_args(p, 0.5, 2.0, 4, "linear")
    p.add_argument("--temps", type=float, nargs="+", help="explicit temperatures")
    p.add_argument("--samples", type=int, default=50_000)
    p.add_argument("--equilibration", type=int, default=1_000)
    p.add_argument("--interval", type=int, default=1)
    p.add_argument("--batches", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=default_jobs())

    p = add("verify", cmd_verify, "run the self-check suites")
    p.add_argument("--suites", nargs="+", choices=list(SUITES), help="subset of suites to run")

    p = add("transform", cmd_transform, "dump the disentangling circuit and image Hamiltonian")
    _structure_args(p)

    p = add("exponents", cmd_exponents, "size exponents over a temperature range")
    _structure_args(p, with_n=False)
    _trange_args(p, 0.2, 5.0, 25, "linear")

    p = add("gap", cmd_gap, "excitation gap above the aligned ground state")
    _structure_args(p)
    p.add_argument("--mode", choices=["single_flip", "spectrum"], default="single_flip")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"stabtherm {args.command}: error: {msg}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
