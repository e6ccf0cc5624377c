"""Command-line entry point: ``polydyn <command> [options]``.

Every command is a thin dispatch onto a library function. Exit status is 0
on success, 1 when the outcome is infeasible or non-convergent (the JSON
output says which), and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import centrality, design, dynamics, io, scenarios
from .stochastic import as_damping, as_influence_matrix, as_state, validate_system

COMMANDS = ("simulate", "limit", "classify", "design-initial", "design-damping",
            "design-family", "centrality", "scenario")
SEED_ENV = "POLYDYN_SEED"

# input files each command needs
_REQUIRED = {
    "simulate": ("w", "a", "x0"),
    "limit": ("w", "a", "x0"),
    "classify": ("w", "a"),
    "design-initial": ("w", "a", "xinf"),
    "design-damping": ("w", "x0", "xinf"),
    "design-family": ("w", "xinf"),
    "centrality": ("w",),
    "scenario": (),
}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    w: str | None = None
    a: str | None = None
    x0: str | None = None
    xinf: str | None = None
    out: str = "."
    format: str = "csv"
    tol: float = 1e-10
    k_max: int = 1_000_000
    record_every: int | None = None
    alpha: float | None = None
    bins: int = 20
    seed: int = 0
    kind: str | None = None
    n: int | None = None
    m: int | None = None
    parameters: dict = field(default_factory=dict)
    replicas: int = 1
    gnuplot_script: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise InputError("format must be csv or json")
        for key in _REQUIRED[self.command]:
            if getattr(self, key) is None:
                raise InputError(f"{self.command} requires --{key}")
        for key in ("w", "a", "x0", "xinf"):
            p = getattr(self, key)
            if p is not None and not Path(p).is_file():
                raise InputError(f"--{key}: no such file {p!r}")
        if self.command == "scenario" and self.kind not in scenarios.KINDS:
            raise InputError(f"scenario kind must be one of {scenarios.KINDS}")
        if self.tol <= 0 or self.k_max < 1 or self.bins < 1 or self.replicas < 1:
            raise InputError("tol, k_max, bins and replicas must be positive")


def _ext(cfg):
    return ".json" if cfg.format == "json" else ".csv"


def _load_system(cfg):
    W = as_influence_matrix(io.read_matrix(cfg.w))
    n = W.shape[0]
    a = as_damping(io.read_vector(cfg.a), n) if cfg.a else None
    X0 = as_state(io.read_matrix(cfg.x0), n) if cfg.x0 else None
    X_inf = as_state(io.read_matrix(cfg.xinf), n) if cfg.xinf else None
    if a is not None and X0 is not None:
        report = validate_system(W, a, X0)
        if not report.valid:
            raise InputError("; ".join(report.violations))
    return W, a, X0, X_inf


def _gnuplot(out: Path, m: int) -> None:
    cols = "0:1" if m == 1 else "1:2"
    xlabel = "node" if m == 1 else "x1"
    ylabel = "x" if m == 1 else "x2"
    script = f"""# end state written by polydyn simulate
set datafile separator ','
set xlabel '{xlabel}'
set ylabel '{ylabel}'
plot 'X_inf.csv' using {cols} with points pt 7 title 'X(inf)'
"""
    (out / "plot.gp").write_text(script)


def _simulate(cfg, W, a, X0, out: Path):
    cls = dynamics.classify(W, a)
    traj, limit = dynamics.iterate(W, a, X0, tol=cfg.tol, k_max=cfg.k_max,
                                   record_every=cfg.record_every)
    io.write_trajectory(traj, out / "trajectory.csv")
    io.write_json(io.limit_json(limit, cls), out / "limit.json")
    io.write_matrix(limit.X_inf, out / "X_inf.csv")
    if cfg.gnuplot_script:
        _gnuplot(out, X0.shape[1])
    if traj.converged:
        return 0, f"converged k={traj.k} case={cls.case}", limit
    extra = " (periodic suspect)" if traj.periodic_suspect else ""
    return 1, f"not converged k={traj.k} delta={traj.final_delta:.3g}{extra} case={cls.case}", limit


def _scenario_one(cfg: RunConfig, seed: int, out: Path) -> tuple[int, str]:
    n = cfg.n or (scenarios.CLEAVAGE_DEFAULTS["n"] if cfg.kind == "cleavage" else 10)
    m = cfg.m or (2 if cfg.kind == "polytope" else 1)
    spec = scenarios.ScenarioSpec(kind=cfg.kind, n=n, m=m, seed=seed,
                                  parameters=dict(cfg.parameters))
    W, a, X0 = scenarios.build(spec)
    out.mkdir(parents=True, exist_ok=True)
    (out / "spec.json").write_text(spec.to_json() + "\n")
    ext = _ext(cfg)
    io.write_matrix(W, out / f"W{ext}")
    io.write_vector(a, out / f"a{ext}")
    io.write_matrix(X0, out / f"X0{ext}")
    status, summary, limit = _simulate(cfg, W, a, X0, out)
    if m == 1:
        h0 = scenarios.histogram(X0, cfg.bins)
        h1 = scenarios.histogram(limit.X_inf, cfg.bins)
        with open(out / "histogram.csv", "w") as fh:
            fh.write("state,bin,lo,hi,count\n")
            for label, h in (("initial", h0), ("final", h1)):
                for b, c in enumerate(h.counts):
                    fh.write(f"{label},{b + 1},{io.fmt(h.edges[b])},{io.fmt(h.edges[b + 1])},{int(c)}\n")
        summary += (f" modes initial={scenarios.count_modes(h0)}"
                    f" final={scenarios.count_modes(h1)}")
    return status, summary


def _scenario_worker(args):
    cfg, seed, out = args
    return _scenario_one(cfg, seed, Path(out))


def run(cfg: RunConfig) -> int:
    """Execute one configured command; returns the process exit status."""
    try:
        cfg.validate()
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        status, summary = _dispatch(cfg, out)
    except (InputError, io.FileFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(summary)
    return status


def _dispatch(cfg: RunConfig, out: Path) -> tuple[int, str]:
    cmd = cfg.command
    ext = _ext(cfg)

    if cmd == "scenario":
        if cfg.replicas == 1:
            return _scenario_one(cfg, cfg.seed, out)
        jobs = [(cfg, cfg.seed + r, str(out / f"replica_{r:03d}")) for r in range(cfg.replicas)]
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_scenario_worker, jobs))
        status = max(s for s, _ in results)
        return status, "\n".join(f"replica {r}: {s}" for r, (_, s) in enumerate(results))

    W, a, X0, X_inf = _load_system(cfg)

    if cmd == "simulate":
        return _simulate(cfg, W, a, X0, out)[:2]

    if cmd == "limit":
        cls = dynamics.classify(W, a)
        try:
            limit = dynamics.closed_form_limit(W, a, X0)
        except dynamics.SingularSystemError as e:
            io.write_json({"error": str(e), "case": cls.case, "converges": cls.converges},
                          out / "limit.json")
            return 1, f"no closed-form limit: case={cls.case}"
        io.write_json(io.limit_json(limit, cls), out / "limit.json")
        io.write_matrix(limit.X_inf, out / f"X_inf{ext}")
        return 0, f"closed-form limit case={cls.case} rcond={limit.diagnostics['rcond']:.3g}"

    if cmd == "classify":
        cls = dynamics.classify(W, a)
        io.write_json({"case": cls.case, "converges": cls.converges, "reason": cls.reason,
                       "spectral_radius_estimate": cls.spectral_radius_estimate,
                       "spectral_radius_bounds": cls.spectral_radius_bounds,
                       "rcond": cls.rcond}, out / "classify.json")
        return (0 if cls.converges else 1), f"case={cls.case} converges={cls.converges}"

    if cmd == "design-initial":
        X0 = design.solve_initial(W, a, X_inf)
        res = design.forward_residual(W, a, X0, X_inf)
        io.write_matrix(X0, out / f"X0{ext}")
        io.write_json(io.design_json(design.DesignSolution(a, X0, res)), out / "design.json")
        return 0, f"initial state solved residual={res:.3g}"

    if cmd == "design-family":
        sol = (design.design_family(W, X_inf, a) if a is not None
               else design.unbiased_design(W, X_inf))
        io.write_matrix(sol.X0, out / f"X0{ext}")
        io.write_json(io.design_json(sol), out / "design.json")
        return 0, f"design residual={sol.residual:.3g}"

    if cmd == "design-damping":
        rep = design.solve_damping(W, X0, X_inf)
        io.write_json(io.feasibility_json(rep), out / "feasibility.json")
        if rep.feasible:
            io.write_vector(rep.a, out / f"a{ext}")
            return 0, f"feasible residual={rep.residual:.3g}"
        bad = [(i + 1, d) for i, d in enumerate(rep.per_node) if d != "ok"]
        detail = ", ".join(f"node {i} {d}" for i, d in bad[:5])
        return 1, f"infeasible: {detail}"

    if cmd == "centrality":
        if cfg.alpha is not None:
            r, how = centrality.alpha_centrality(W, cfg.alpha), f"alpha={cfg.alpha:g}"
        elif a is not None:
            V = dynamics.closed_form_limit(W, a, np.zeros((W.shape[0], 1))).V
            r, how = centrality.net_influence(V), "net influence"
        else:
            r, how = centrality.perron_centrality(W), "perron"
        io.write_vector(r, out / f"centrality{ext}")
        order = np.argsort(-r, kind="stable")
        ranked = "\n".join(f"{rank + 1:>4}  node {i + 1:<6} {r[i]:.6f}"
                           for rank, i in enumerate(order))
        return 0, f"centrality ({how})\n{ranked}"

    raise InputError(f"unknown command {cmd!r}")  # pragma: no cover


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polydyn", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with RunConfig keys")
        sp.add_argument("--w", help="influence matrix W (CSV or JSON)")
        sp.add_argument("--a", help="damping vector (CSV line or JSON array)")
        sp.add_argument("--x0", help="initial state X(0)")
        sp.add_argument("--xinf", help="target state X(inf)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--tol", type=float)
        sp.add_argument("--k-max", dest="k_max", type=int)
        sp.add_argument("--record-every", dest="record_every", type=int)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--bins", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--gnuplot-script", dest="gnuplot_script",
                        action="store_const", const=True)

    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "scenario":
            sp.add_argument("kind", choices=scenarios.KINDS)
            sp.add_argument("--n", type=int)
            sp.add_argument("--m", type=int)
            sp.add_argument("--param", action="append", default=[], metavar="KEY=JSON",
                            help="scenario parameter, value parsed as JSON")
            sp.add_argument("--replicas", type=int)
        common(sp)
    return p


def config_from_args(args) -> RunConfig:
    d: dict = {}
    if getattr(args, "config", None):
        try:
            d = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"--config: {e}") from None
        if not isinstance(d, dict):
            raise InputError("--config must hold a JSON object")
    d = dict(d)
    d["command"] = args.command
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            d["seed"] = int(env_seed)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer") from None
    skip = {"config", "command", "verbose", "param"}
    for key, val in vars(args).items():
        if key not in skip and val is not None:
            d[key] = val
    params = dict(d.get("parameters", {}))
    for item in getattr(args, "param", []) or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            params[key] = json.loads(val)
        except json.JSONDecodeError:
            params[key] = val
    if params:
        d["parameters"] = params
    return RunConfig.from_dict(d)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
