"""Batch front end: constants, eval, verify, simulate, riesz and suite.

Every run echoes its full configuration and the tool version.  Numbers are
written with 15 significant digits; CSV output leaves out wall time so that
repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata

import numpy as np

from . import burkholder, constants, martsim, spectral

COMMANDS = ("constants", "eval", "verify", "simulate", "riesz")
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "json"
    out_path: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS + ("suite",):
            raise UsageError(f"unknown command {self.command!r}")
        if self.output not in ("json", "csv"):
            raise UsageError(f"unknown output format {self.output!r}")


@dataclass
class RunReport:
    config: RunConfig
    rows: list
    passed: bool
    wall_time: float = 0.0

    def to_json(self) -> str:
        doc = {
            "version": version(),
            "config": asdict(self.config),
            "pass": self.passed,
            "wall_time": self.wall_time,
            "rows": [{k: _fmt(v) for k, v in r.items()} for r in self.rows],
        }
        return json.dumps(doc, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cfg = asdict(self.config)
        cfg.pop("out_path")
        buf.write(f"# sharpmart {version()} config={json.dumps(cfg, sort_keys=True)}\n")
        cols: list[str] = []
        for r in self.rows:
            cols += [k for k in r if k not in cols]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _fmt(v) for k, v in r.items()})
        buf.write(f"# pass={self.passed}\n")
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.15g}") if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


# ---------------------------------------------------------------- commands

def _get(params, key, default=None, cast=float):
    v = params.get(key, default)
    if v is None:
        raise UsageError(f"missing parameter {key!r}")
    return cast(v)


def _check_keys(params, allowed):
    extra = set(params) - set(allowed)
    if extra:
        raise UsageError(f"unknown parameters {sorted(extra)}")


def run_constants(cfg: RunConfig) -> list[dict]:
    P = cfg.params
    _check_keys(P, {"p", "K"})
    p = _get(P, "p", "nan")
    K = _get(P, "K", "nan")
    table = constants.constant_table(None if math.isnan(p) else p, None if math.isnan(K) else K)
    return [{"name": r.name, "p_or_k": r.p_or_k, "value": r.value, "provenance": r.method,
             "est_error": r.est_error, "pass": True} for r in table]


FUNCTION_PARAM = {
    "log_U": "K", "weak_U_lt2": "p", "weak_U_gt2": "p", "burkholder_U_lt2": "p",
    "burkholder_U_ge2": "p", "davis_U": "p", "u_infty": None,
}
FUNCTION_LEMMA = {
    "log_U": "maj1", "weak_U_lt2": "maj2", "weak_U_gt2": "maj3", "burkholder_U_lt2": "burkholder",
    "burkholder_U_ge2": "burkholder", "davis_U": "davis",
}


def _handle(P):
    name = P.get("function")
    if name not in FUNCTION_PARAM:
        raise UsageError(f"unknown function {name!r}")
    key = FUNCTION_PARAM[name]
    params = {key: _get(P, key)} if key else {}
    return name, burkholder.make_handle(name, **params)


def run_eval(cfg: RunConfig) -> list[dict]:
    P = cfg.params
    _check_keys(P, {"function", "p", "K", "x", "y", "t"})
    name, fn = _handle(P)
    a = abs(_get(P, "x"))
    b = _get(P, "t") if fn.kind == "davis" else abs(_get(P, "y"))
    return [{"function": name, **fn.params, "x": a, "y_or_t": b, "value": float(fn(a, b)),
             "provenance": "closed_form", "pass": True}]


def run_verify(cfg: RunConfig) -> list[dict]:
    P = cfg.params
    _check_keys(P, {"function", "p", "K", "points", "R"})
    name, fn = _handle(P)
    n = _get(P, "points", 100_000, int)
    rows = []
    if name in FUNCTION_LEMMA:
        rep = burkholder.scan_majorization(fn, FUNCTION_LEMMA[name], n_points=n, seed=cfg.seed,
                                           R=_get(P, "R", 10.0))
        rows.append({"function": name, **fn.params, "check": f"majorization_{FUNCTION_LEMMA[name]}",
                     "n_points": rep.n_points, "worst": rep.worst_violation, "tolerance": rep.tolerance,
                     "provenance": "closed_form", "pass": rep.passed})
    sm = burkholder.scan_c1_and_concavity(fn, seed=cfg.seed)
    for r in sm.reports:
        rows.append({"function": name, **fn.params, "check": r.label, "n_points": r.n_points,
                     "worst": r.worst_violation, "tolerance": r.tolerance,
                     "provenance": "closed_form", "pass": r.passed})
    return rows


def _mc_row(name, est: martsim.McEstimate, bound, ok, **extra):
    return {"experiment": name, **extra, "estimate": est.mean, "std_err": est.std_err,
            "bound": bound, "n_paths": est.n_paths, "provenance": "mc", "pass": bool(ok)}


def run_simulate(cfg: RunConfig) -> list[dict]:
    P = cfg.params
    _check_keys(P, {"experiment", "p", "K", "n_paths", "dt", "T", "dim", "a", "c", "gap_tol", "k_max",
                    "mutate"})
    exp = P.get("experiment")
    n_paths = _get(P, "n_paths", 10_000, int)
    dt = _get(P, "dt", 1e-4)
    mut = _get(P, "mutate", 1.0)
    if exp in ("lp", "davis"):
        p = _get(P, "p", 3.0)
        lc = martsim.LpConfig(p=p, T=_get(P, "T", 1.0), dt=dt, n_paths=n_paths, seed=cfg.seed,
                              dim=_get(P, "dim", 1, int), threads=cfg.threads)
        c, a = _get(P, "c", 1.0), _get(P, "a", 1.0)
        pot = martsim.PotentialSpec.constant_matrix(-c * np.eye(lc.dim), a=a)
        if exp == "lp":
            est = martsim.estimate_lp_ratio(lc, martsim.TransformSpec("scalar_sign"), pot)
            bound = mut * (constants.p_star(p) - 1)
            return [_mc_row("lp", est, bound, est.mean <= bound + 3 * est.std_err, p=p)]
        dr = martsim.estimate_davis_ratio(lc, pot)
        bound = mut * dr.d_p
        rows = [_mc_row("davis_terminal", dr.terminal, bound, dr.terminal.mean <= bound + 3 * dr.terminal.std_err, p=p)]
        if dr.maximal is not None:
            b2 = mut * dr.a_p
            rows.append(_mc_row("davis_maximal", dr.maximal, b2, dr.maximal.mean <= b2 + 3 * dr.maximal.std_err, p=p))
        return rows
    ec = martsim.ExtremalConfig(n_paths=n_paths, dt=dt, seed=cfg.seed, threads=cfg.threads, strict=False)
    gap_tol = _get(P, "gap_tol", 0.02)
    if exp in ("llogl", "weak"):
        if exp == "llogl":
            K = _get(P, "K", 2.0)
            res, extra = martsim.extremal_llogl(K, ec), {"K": K}
        else:
            p = _get(P, "p", 1.5)
            res, extra = martsim.extremal_weak(p, ec), {"p": p}
        ok_budget = res.unstopped_fraction <= martsim.UNSTOPPED_BUDGET
        rows = [
            _mc_row(f"{exp}_lhs", res.lhs, float("nan"), True, **extra),
            _mc_row(f"{exp}_rhs", res.rhs, float("nan"), True, **extra),
            {"experiment": f"{exp}_gap", **extra, "estimate": res.gap, "std_err": res.gap_se,
             "bound": gap_tol * mut, "n_paths": n_paths, "provenance": "mc",
             "pass": bool(res.gap < gap_tol * mut and ok_budget)},
            {"experiment": f"{exp}_unstopped", **extra, "estimate": res.unstopped_fraction, "std_err": 0.0,
             "bound": martsim.UNSTOPPED_BUDGET, "n_paths": n_paths, "provenance": "mc", "pass": ok_budget},
        ]
        if exp == "weak":
            rows.append({"experiment": "weak_ratio", **extra, "estimate": res.extra["ratio"],
                         "std_err": res.extra["ratio_se"], "bound": mut * res.extra["k_p"], "n_paths": n_paths,
                         "provenance": "mc", "pass": abs(res.extra["ratio"] / (mut * res.extra["k_p"]) - 1) < 0.03})
        return rows
    if exp == "exit":
        dim = _get(P, "dim", 3, int)
        table = martsim.exit_time_moments(dim, _get(P, "k_max", 3, int), ec)
        rows = []
        for m in table:
            if m.k == 1:
                target = 1 / dim
                ok = abs(m.estimate.mean - target * mut) <= 0.02 * target * mut
                rows.append(_mc_row("exit_moment", m.estimate, target * mut, ok, k=1, dim=dim))
            else:
                b = m.bound * mut
                rows.append(_mc_row("exit_moment", m.estimate, b, m.estimate.mean <= b + 3 * m.estimate.std_err,
                                    k=m.k, dim=dim))
        return rows
    raise UsageError(f"unknown experiment {exp!r}")


def _trial_row(domain, check, i, rec: spectral.CheckRecord, tol=1e-9, **extra):
    return {"domain": domain, "check": check, "trial": i, **extra, "lhs": rec.lhs, "rhs": rec.rhs,
            "slack": rec.slack, "provenance": "quadrature", "pass": rec.slack >= -tol}


def run_riesz(cfg: RunConfig) -> list[dict]:
    P = cfg.params
    _check_keys(P, {"domain", "check", "p", "K", "N", "grid", "trials", "mutate", "dim"})
    dom, chk = P.get("domain"), P.get("check")
    trials = _get(P, "trials", 100, int)
    mut = _get(P, "mutate", 1.0)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    if dom in ("circle", "torus"):
        n = _get(P, "grid", 2 ** 14 if dom == "circle" else 64, int)
        d = _get(P, "dim", 2, int)
        op = spectral.hilbert_circle if dom == "circle" else (lambda f: spectral.riesz_torus(f, 1))

        def sample():
            if dom == "circle":
                return spectral.random_trig_poly(rng, n, int(rng.integers(1, 65)))
            c = rng.standard_normal((n,) * d) * (rng.random((n,) * d) < 0.02)
            return spectral.SpectralField.from_samples(spectral.SpectralField.from_coeffs(c, "torus_n").samples)

        for i in range(trials):
            f = sample()
            if chk == "lp":
                p = _get(P, "p", 4.0)
                r = spectral.lp_ratio(f, p, op)
                bound = mut * constants.pichorides(p) * 1.05
                rows.append({"domain": dom, "check": "lp", "trial": i, "p": p, "lhs": r, "rhs": bound,
                             "slack": bound - r, "provenance": "quadrature", "pass": r <= bound})
                continue
            rf = op(f).samples
            A = np.abs(rf) >= np.quantile(np.abs(rf), rng.uniform(0.05, 0.95))
            if chk == "llogl":
                K = _get(P, "K", 2.0)
                rows.append(_trial_row(dom, chk, i, spectral.check_llogl(f, A, K, op, const=mut), K=K))
            elif chk == "weak":
                p = _get(P, "p", 1.5)
                rows.append(_trial_row(dom, chk, i, spectral.check_weak_type(f, A, p, op, const=mut), p=p))
            else:
                raise UsageError(f"check {chk!r} is not available on {dom}")
        return rows
    if dom == "sphere":
        if chk != "duality":
            raise UsageError("the sphere supports --check duality")
        N = _get(P, "N", 12, int)
        for i in range(trials):
            f = spectral.HarmonicField.random("sphere2", N, rng)
            g = spectral.HarmonicField.random("sphere2", N, rng)
            for kind in ("cylinder", "ball"):
                for pair in ((1, 2), (1, 3), (2, 3)):
                    res = spectral.check_sphere_duality(f, g, kind, pair)
                    rows.append({"domain": dom, "check": "duality", "trial": i, "kind": kind,
                                 "pair": f"{pair[0]}{pair[1]}", "lhs": res, "rhs": 1e-10 * mut,
                                 "slack": 1e-10 * mut - res, "provenance": "closed_form",
                                 "pass": res < 1e-10 * mut})
        return rows
    if dom == "gauss":
        N = _get(P, "N", 10, int)
        for i in range(trials):
            deg = int(rng.integers(1, N + 1))
            f = spectral.HarmonicField("hermite1d", deg, np.concatenate([[0.0], rng.standard_normal(deg)]))
            if chk == "lp":
                # L^2 isometry of the Ornstein-Uhlenbeck Riesz transform
                err = abs(spectral.ou_riesz_1d(f).norm() - f.norm())
                rows.append({"domain": dom, "check": "isometry", "trial": i, "lhs": err, "rhs": 1e-10 * mut,
                             "slack": 1e-10 * mut - err, "provenance": "closed_form", "pass": err < 1e-10 * mut})
                continue
            a, b = np.sort(rng.normal(0, 2, 2))
            E = [(a, b)] if rng.random() < 0.7 else [(-np.inf, np.inf)]
            if chk == "llogl":
                K = _get(P, "K", 2.0)
                rec = spectral.check_gauss_inequalities(f, E, "llogl", K)
                rec = spectral.CheckRecord(rec.lhs, mut * rec.rhs, mut * rec.rhs - rec.lhs, rec.info)
                rows.append(_trial_row(dom, chk, i, rec, K=K))
            elif chk == "weak":
                p = _get(P, "p", 1.5)
                rec = spectral.check_gauss_inequalities(f, E, "weak", p)
                rec = spectral.CheckRecord(rec.lhs, mut * rec.rhs, mut * rec.rhs - rec.lhs, rec.info)
                rows.append(_trial_row(dom, chk, i, rec, p=p))
            else:
                raise UsageError(f"check {chk!r} is not available on {dom}")
        return rows
    raise UsageError(f"unknown domain {dom!r}")


DISPATCH = {"constants": run_constants, "eval": run_eval, "verify": run_verify,
            "simulate": run_simulate, "riesz": run_riesz}


def run(cfg: RunConfig) -> RunReport:
    t0 = time.perf_counter()
    if cfg.command == "suite":
        return suite(cfg.params.get("name", "fast"), cfg)
    rows = DISPATCH[cfg.command](cfg)
    return RunReport(cfg, rows, all(bool(r["pass"]) for r in rows), time.perf_counter() - t0)


# ------------------------------------------------------------------- suite

def _suite_runs(name: str, mutate: float) -> list[tuple[str, dict]]:
    m = {"mutate": mutate} if mutate != 1.0 else {}
    runs: list[tuple[str, dict]] = [("constants", {"p": p}) for p in (1.5, 2.0, 3.0)]
    runs.append(("constants", {"K": 2.0}))
    for K in (1.5, 2.0, 5.0):
        runs.append(("verify", {"function": "log_U", "K": K}))
    for p in (1.2, 1.5):
        runs += [("verify", {"function": "weak_U_lt2", "p": p}), ("verify", {"function": "burkholder_U_lt2", "p": p})]
    for p in (3.0, 5.0):
        runs += [("verify", {"function": "weak_U_gt2", "p": p}), ("verify", {"function": "burkholder_U_ge2", "p": p})]
    for p in (1.2, 1.5, 3.0, 5.0):
        runs.append(("verify", {"function": "davis_U", "p": p}))
    runs += [
        ("riesz", {"domain": "circle", "check": "lp", "p": 4.0, "trials": 50, **m}),
        ("riesz", {"domain": "circle", "check": "llogl", "K": 1.0, "trials": 50, **m}),
        ("riesz", {"domain": "circle", "check": "weak", "p": 1.5, "trials": 50, **m}),
        ("riesz", {"domain": "torus", "check": "weak", "p": 3.0, "trials": 20, **m}),
        ("riesz", {"domain": "sphere", "check": "duality", "N": 12, "trials": 5, **m}),
        ("riesz", {"domain": "gauss", "check": "lp", "trials": 50, **m}),
        ("riesz", {"domain": "gauss", "check": "llogl", "K": 2.0, "trials": 50, **m}),
        ("riesz", {"domain": "gauss", "check": "weak", "p": 1.5, "trials": 50, **m}),
    ]
    if name == "full":
        runs += [
            ("simulate", {"experiment": "lp", "p": 1.5, **m}),
            ("simulate", {"experiment": "lp", "p": 3.0, **m}),
            ("simulate", {"experiment": "davis", "p": 2.0, "dt": 1e-3, **m}),
            ("simulate", {"experiment": "llogl", "K": 2.0, **m}),
            ("simulate", {"experiment": "llogl", "K": 5.0, **m}),
            ("simulate", {"experiment": "weak", "p": 1.5, **m}),
            ("simulate", {"experiment": "exit", "dim": 3, **m}),
        ]
    elif name != "fast":
        raise UsageError(f"unknown suite {name!r}")
    return runs


def suite(name: str, cfg: RunConfig) -> RunReport:
    t0 = time.perf_counter()
    mutate = float(cfg.params.get("mutate", 1.0))
    rows = []
    for i, (cmd, params) in enumerate(_suite_runs(name, mutate)):
        sub = RunConfig(cmd, {k: str(v) for k, v in params.items()}, cfg.seed, cfg.output, None, cfg.threads)
        for r in DISPATCH[cmd](sub):
            rows.append({"run": i, "command": cmd, **r})
    return RunReport(cfg, rows, all(bool(r["pass"]) for r in rows), time.perf_counter() - t0)


# -------------------------------------------------------------------- main

def read_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sharpmart", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {version()}")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", choices=("json", "csv"))
    common.add_argument("--out", dest="out_path")
    common.add_argument("--threads", type=int)
    common.add_argument("--config", help="plain-text key=value file; flags override it")

    def add(name, *flags):
        sp = sub.add_parser(name, parents=[common])
        for fl in flags:
            sp.add_argument(f"--{fl}")
        return sp

    add("constants", "p", "K")
    add("eval", "function", "p", "K", "x", "y", "t")
    add("verify", "function", "p", "K", "points", "R")
    add("simulate", "experiment", "p", "K", "n_paths", "dt", "T", "dim", "a", "c", "gap_tol", "k_max", "mutate")
    add("riesz", "domain", "check", "p", "K", "N", "grid", "trials", "dim", "mutate")
    sp = add("suite", "mutate")
    sp.add_argument("name", choices=("fast", "full"))
    return ap


META = ("seed", "output", "out_path", "threads", "config", "command")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    vals = read_config_file(ns.config) if ns.config else {}
    for k, v in vars(ns).items():
        if v is not None and k != "config":
            vals[k] = v
    meta = {k: vals.pop(k) for k in META if k in vals}
    if ns.command == "suite":
        vals = {"name": vals.pop("name"), **vals}
    return RunConfig(
        command=meta["command"],
        params={k: str(v) for k, v in vals.items()},
        seed=int(meta.get("seed", 0)),
        output=meta.get("output", "json"),
        out_path=meta.get("out_path"),
        threads=int(meta.get("threads", 1)),
    )


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
        report = run(cfg)
    except (UsageError, KeyError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # module-level failure
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = report.to_csv() if cfg.output == "csv" else report.to_json()
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
