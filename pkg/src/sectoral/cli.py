"""Command-line front end: configure one operator/contour/experiment,
run it, and emit JSON (full record) plus CSV (samples) reports.

Exit codes: 0 all pass flags true, 2 a computed pass flag is false,
1 configuration or numerical error.  Config files are flat INI-style
key=value files; section names are ignored and keys are merged.  CLI
flags override config-file keys.  The SECTORAL_OUT environment variable
overrides the output directory.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from typing import Optional

import numpy as np

from . import presets, topology
from .contour import make_sector_contour
from .errors import ConfigInvalid, SectoralError
from .experiments import (ExperimentReport, composition_gap_experiment,
                          parametrix_gap_experiment, perturbation_experiment,
                          resolvent_decay_experiment)
from .projections import (sectorial_projection, wodzicki_residual)
from .symbol1d import CutoffFunction, SymbolFunction, cutoff_resolvent_symbol

# keys understood by every subcommand
COMMON_KEYS = {
    "preset": "operator/bundle preset name",
    "K": "Fourier mode cutoff (operator presets)",
    "contour": "contour preset name (default: imag)",
    "R": "contour arc radius override",
    "lambda_max_contour": "contour ray truncation override",
    "panels_arc": "quadrature panels on the arc",
    "panels_ray": "quadrature panels per ray",
    "gauss_order": "Gauss-Legendre order per panel",
    "out": "output directory for reports",
    "seed": "RNG seed for random presets",
    "threads": "worker cap (samples evaluate serially at or below this)",
}

COMMAND_KEYS = {
    "project": {"include_matrix": "embed the projection matrix in the JSON"},
    "perturb": {"perturbation": "perturbation preset name",
                "s": "Sobolev index", "eps_min": "smallest epsilon",
                "eps_max": "largest epsilon", "n_eps": "epsilon sample count"},
    "resolvent-decay": {"s": "Sobolev index", "p": "norm offset in [0, m]",
                        "ray_angle": "ray angle in radians",
                        "lambda_min": "smallest |lambda|",
                        "lambda_max": "largest |lambda|",
                        "n_samples": "lambda sample count"},
    "parametrix": {"s": "Sobolev index", "rho": "cutoff radius",
                   "ray_angle": "ray angle in radians",
                   "lambda_min": "smallest |lambda|",
                   "lambda_max": "largest |lambda|",
                   "n_samples": "lambda sample count"},
    "compose-gap": {"pair": "symbol pair preset: resolvent_pair, "
                            "multiplier_pair, or order_zero_pair",
                    "s": "Sobolev index", "rho": "cutoff radius",
                    "lambda_min": "smallest |lambda|",
                    "lambda_max": "largest |lambda|",
                    "n_samples": "lambda sample count"},
    "obstruction": {"level": "icosphere refinement level"},
    "wodzicki": {"exponent": "power s (real part; purely real here)",
                 "alpha1": "first branch-cut angle",
                 "alpha2": "second branch-cut angle"},
    "spectral-flow": {"path": "matrix path preset name",
                      "n_path_samples": "path sample count"},
    "list-presets": {},
}

_FLOAT_KEYS = {"R", "lambda_max_contour", "s", "p", "ray_angle",
               "lambda_min", "lambda_max", "eps_min", "eps_max", "rho",
               "exponent", "alpha1", "alpha2"}
_INT_KEYS = {"K", "panels_arc", "panels_ray", "gauss_order", "seed",
             "threads", "n_eps", "n_samples", "level", "n_path_samples"}
_BOOL_KEYS = {"include_matrix"}


def _coerce(key: str, raw: str):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            if str(raw).lower() in ("1", "true", "yes", "on"):
                return True
            if str(raw).lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigInvalid(key, f"cannot parse value {raw!r}")


def load_config(path: str, command: str) -> dict:
    """Read a flat key=value config file; unknown keys are rejected."""
    if not os.path.isfile(path):
        raise ConfigInvalid("config", f"config file {path!r} not found")
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys are case-sensitive (K vs k)
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigInvalid("config", f"unparsable config: {exc}")
    known = dict(COMMON_KEYS)
    known.update(COMMAND_KEYS[command])
    out = {}
    sections = [parser[s] for s in parser.sections()]
    if parser.defaults():
        sections.insert(0, parser.defaults())
    for section in sections:
        for key, raw in section.items():
            if key not in known:
                raise ConfigInvalid(key, f"unknown config key for {command}")
            out[key] = _coerce(key, raw)
    return out


def _json_default(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def canonical_json(record: dict) -> str:
    """Deterministic serialization: timestamp excluded, keys sorted."""
    rec = {k: v for k, v in record.items() if k != "timestamp"}
    return json.dumps(rec, sort_keys=True, separators=(",", ":"),
                      default=_json_default)


def _write_reports(record: dict, kind: str, preset: str, out_dir: str,
                   samples=None) -> str:
    os.makedirs(out_dir, exist_ok=True)
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
    base = os.path.join(out_dir, f"{kind}-{preset}-{stamp}")
    record = dict(record, timestamp=stamp)
    with open(base + ".json", "w") as fh:
        json.dump(record, fh, sort_keys=True, indent=2,
                  default=_json_default)
        fh.write("\n")
    if samples is not None:
        with open(base + ".csv", "w") as fh:
            fh.write("abscissa,value\n")
            for x, y in samples:
                fh.write(f"{float(x)!r},{float(y)!r}\n")
    return base + ".json"


def _build_contour(opt: dict):
    name = opt.get("contour", "imag")
    kw = {}
    if opt.get("R") is not None:
        kw["R"] = opt["R"]
    if opt.get("lambda_max_contour") is not None:
        kw["lambda_max"] = opt["lambda_max_contour"]
    for k in ("panels_arc", "panels_ray", "gauss_order"):
        if opt.get(k) is not None:
            kw[k] = opt[k]
    return presets.get_contour(name, **kw)


def _experiment_record(rep: ExperimentReport, preset: str, extra=None) -> dict:
    rec = rep.to_json_dict()
    rec["preset"] = preset
    if extra:
        rec.update(extra)
    return rec


def _cmd_project(opt: dict) -> tuple:
    preset = opt.get("preset", "dtheta")
    K = opt.get("K", 16)
    A = presets.get_operator(preset, K)
    c = _build_contour(opt)
    res = sectorial_projection(A, c)
    ok = res.idempotency_defect <= max(1e-6,
                                       10 * res.truncation_error_estimate)
    rec = res.to_record(include_matrix=bool(opt.get("include_matrix")))
    rec.update({"experiment_kind": "project", "preset": preset, "K": K,
                "contour": c.to_dict(), "pass": bool(ok and res.resolved)})
    return rec, "project", preset, None


def _cmd_perturb(opt: dict) -> tuple:
    preset = opt.get("preset", "variable_coeff_shift")
    pert = opt.get("perturbation", "cos_theta_lower")
    K = opt.get("K", 32)
    A = presets.get_operator(preset, K)
    if pert not in presets.PERTURBATION_PRESETS:
        raise ConfigInvalid("perturbation", f"unknown preset {pert!r}")
    dA = presets.PERTURBATION_PRESETS[pert][0](K)
    eps = np.geomspace(opt.get("eps_min", 1e-4), opt.get("eps_max", 1e-1),
                       opt.get("n_eps", 13))
    c = _build_contour(opt)
    rep = perturbation_experiment(A, dA, eps, opt.get("s", 0.0), c)
    rec = _experiment_record(rep, preset,
                             {"perturbation": pert, "K": K,
                              "contour": c.to_dict()})
    return rec, "perturbation", preset, rep.samples


def _cmd_resolvent(opt: dict) -> tuple:
    preset = opt.get("preset", "dtheta_shift")
    K = opt.get("K", 256)
    A = presets.get_operator(preset, K)
    rep = resolvent_decay_experiment(
        A, opt.get("ray_angle", np.pi / 2), opt.get("s", 0.0),
        opt.get("p", 0.0),
        (opt.get("lambda_min", 6.4), opt.get("lambda_max", 64.0)),
        opt.get("n_samples"))
    rec = _experiment_record(rep, preset, {"K": K})
    return rec, "resolvent_decay", preset, rep.samples


def _cmd_parametrix(opt: dict) -> tuple:
    preset = opt.get("preset", "variable_coeff_shift")
    K = opt.get("K", 128)
    A = presets.get_operator(preset, K)
    psi = CutoffFunction(opt.get("rho", 4.0))
    rep = parametrix_gap_experiment(
        A, psi, opt.get("ray_angle", np.pi / 2), opt.get("s", 0.0),
        (opt.get("lambda_min", 10.0), opt.get("lambda_max", 50.0)),
        opt.get("n_samples"))
    rec = _experiment_record(rep, preset, {"K": K})
    return rec, "parametrix_gap", preset, rep.samples


def _symbol_pair(pair: str, rho: float):
    am = presets.symbol_c_theta_times_xi()
    psi = CutoffFunction(rho)

    def g_family(lam):
        return cutoff_resolvent_symbol(am, psi, lam)

    if pair == "resolvent_pair":
        def f_family(lam):
            ev = lambda theta, xi: np.asarray(am.evaluate(theta, xi)) - lam
            return SymbolFunction(order=1, evaluate=ev,
                                  principal=am.principal, name="a_m-lam")
        return f_family, g_family, 1.0, 1.0, 0.15
    if pair == "multiplier_pair":
        def f_family(lam):
            ev = lambda theta, xi: np.full_like(np.asarray(theta, float),
                                                xi - lam, dtype=complex)
            pr = lambda theta, xi: np.full_like(np.asarray(theta, float),
                                                xi, dtype=complex)
            return SymbolFunction(order=1, evaluate=ev, principal=pr,
                                  name="xi-lam")

        def g2_family(lam):
            ev = lambda theta, xi: np.full_like(
                np.asarray(theta, float), psi(xi) / (xi - lam),
                dtype=complex)
            return SymbolFunction(order=-1, evaluate=ev, principal=ev,
                                  name="psi/(xi-lam)")
        return f_family, g2_family, 1.0, 1.0, 0.15
    if pair == "order_zero_pair":
        def f_family(lam):
            g = cutoff_resolvent_symbol(am, psi, lam)
            phase = lambda theta: np.exp(1j * np.asarray(theta, float))
            ev = lambda theta, xi: g.evaluate(theta, xi) * phase(theta) * xi
            pr = lambda theta, xi: g.principal(theta, xi) * phase(theta) * xi
            return SymbolFunction(order=0, evaluate=ev, principal=pr,
                                  name="r_psi*b")
        return f_family, g_family, 0.0, 1.0, 0.2
    raise ConfigInvalid("pair", f"unknown symbol pair {pair!r}")


def _cmd_compose(opt: dict) -> tuple:
    pair = opt.get("pair", "resolvent_pair")
    K = opt.get("K", 128)
    f_family, g_family, r, m, tol = _symbol_pair(pair, opt.get("rho", 1.0))
    rep = composition_gap_experiment(
        f_family, g_family, r, m, opt.get("s", 0.0),
        (opt.get("lambda_min", 10.0), opt.get("lambda_max", 50.0)),
        K, opt.get("n_samples"), tolerance=tol)
    rec = _experiment_record(rep, pair, {"K": K})
    return rec, "composition_gap", pair, rep.samples


def _cmd_obstruction(opt: dict) -> tuple:
    preset = opt.get("preset", "monopole")
    if preset not in topology.BUNDLE_PRESETS:
        raise ConfigInvalid("preset", f"unknown bundle preset {preset!r}")
    rec = topology.obstruction_demo(preset, opt.get("level", 3))
    rec = dict(rec, experiment_kind="obstruction", preset=preset,
               **{"pass": bool(rec["rounding_residual"] < 0.05
                               and rec["hyperbolic_everywhere"])})
    return rec, "obstruction", preset, None


def _cmd_wodzicki(opt: dict) -> tuple:
    preset = opt.get("preset", "dtheta_shift")
    K = opt.get("K", 16)
    A = presets.get_operator(preset, K)
    if opt.get("R") is None:
        # the arc must pass below the smallest eigenvalue modulus, or the
        # projection misses the eigenvalues hiding inside the arc
        from . import linalg
        opt = dict(opt, R=0.5 * float(
            np.abs(linalg.eig(A.matrix).values).min()))
    c = _build_contour(opt)
    alpha1 = opt.get("alpha1", c.alpha1)
    alpha2 = opt.get("alpha2", c.alpha2)
    s = opt.get("exponent", 0.5)
    resid = wodzicki_residual(A.matrix, s, alpha1, alpha2, c)
    rec = {"experiment_kind": "wodzicki", "preset": preset, "K": K,
           "exponent": s, "alpha1": alpha1, "alpha2": alpha2,
           "residual": resid, "contour": c.to_dict(),
           "pass": bool(resid <= 1e-6)}
    return rec, "wodzicki", preset, None


def _cmd_spectral_flow(opt: dict) -> tuple:
    name = opt.get("path", "crossing")
    if name not in presets.PATH_PRESETS:
        raise ConfigInvalid("path", f"unknown path preset {name!r}")
    f = presets.PATH_PRESETS[name][0]
    path = topology.sample_path(f, opt.get("n_path_samples", 33))
    flow = topology.spectral_flow(path)
    rec = {"experiment_kind": "spectral_flow", "preset": name,
           "flow": int(flow), "n_samples": len(path.samples), "pass": True}
    return rec, "spectral_flow", name, None


_HANDLERS = {
    "project": _cmd_project,
    "perturb": _cmd_perturb,
    "resolvent-decay": _cmd_resolvent,
    "parametrix": _cmd_parametrix,
    "compose-gap": _cmd_compose,
    "obstruction": _cmd_obstruction,
    "wodzicki": _cmd_wodzicki,
    "spectral-flow": _cmd_spectral_flow,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectoral",
        description="Sectorial spectral projections and decay-law "
                    "experiments for matrices and 1-D periodic operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in list(_HANDLERS) + ["list-presets"]:
        keys = dict(COMMON_KEYS)
        keys.update(COMMAND_KEYS[command])
        p = sub.add_parser(command, help=f"run {command}")
        if command != "list-presets":
            p.add_argument("--config", help="key=value config file")
            for key, doc in sorted(keys.items()):
                flag = "--" + key.replace("_", "-")
                p.add_argument(flag, dest=key, default=None, help=doc)
    return parser


def run(command: str, opt: dict) -> int:
    if command == "list-presets":
        sys.stdout.write(presets.describe_presets())
        return 0
    seed = opt.get("seed")
    if seed is not None:
        np.random.seed(seed)
    rec, kind, preset, samples = _HANDLERS[command](opt)
    out_dir = os.environ.get("SECTORAL_OUT") or opt.get("out") or "."
    path = _write_reports(rec, kind, preset, out_dir, samples)
    ok = bool(rec.get("pass", True))
    print(f"{kind} [{preset}]: {'pass' if ok else 'FAIL'} -> {path}")
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        opt = {}
        if command != "list-presets":
            if getattr(args, "config", None):
                opt.update(load_config(args.config, command))
            known = dict(COMMON_KEYS)
            known.update(COMMAND_KEYS[command])
            for key in known:
                raw = getattr(args, key, None)
                if raw is not None:
                    opt[key] = _coerce(key, raw) if isinstance(raw, str) \
                        else raw
        return run(command, opt)
    except (SectoralError, ConfigInvalid) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
