"""Command-line front end: pmf | pgf | survival | verify | simulate.

Output is CSV (default) or JSON, printed only after the whole computation
succeeds, so a failure never leaves a partial table behind.  Configuration
precedence: command-line flags > the JSON file named by FRACPOIS_CONFIG >
built-in defaults.  Exit codes: 0 ok, 1 verification failed, 2 bad
parameters, 3 convergence failure, 4 unsupported variant.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .adm import SeriesControl
from .errors import ConvergenceError, ParameterError, UnsupportedVariantError
from .processes import (
    FractionalParams,
    adm_closed_form_diff,
    composition_tuples_residual,
    kolmogorov_residual,
    pmf,
    pmf_tail_mass,
    sstfpp_pgf,
    truncated_normalization_residual,
    waiting_survival,
)
from .saigo import SaigoParams, semigroup_counterexample
from .simulate import chi_square_gof, empirical_pmf

VARIANTS = ("classical", "tfpp", "sfpp", "stfpp", "sstfpp")

DEFAULTS = {
    "variant": "stfpp",
    "lam": 1.0,
    "alpha": 0.7,
    "nu": 0.6,
    "beta": None,
    "gamma_p": 0.0,
    "t": None,
    "t_start": 1.0,
    "t_stop": None,
    "t_count": 1,
    "n_max": 10,
    "u": 0.5,
    "max_k": 40,
    "tol_abs": 1e-12,
    "tol_rel": 1e-12,
    "term_cap": 10_000,
    "format": "csv",
    "seed": 12345,
    "samples": 100_000,
}

# Per-variant parameter derivation: fixed values the variant pins down.
PINNED = {
    "classical": {"alpha": 1.0, "nu": 1.0, "beta": -1.0, "gamma_p": 0.0},
    "tfpp": {"nu": 1.0, "gamma_p": 0.0},
    "sfpp": {"alpha": 1.0, "beta": -1.0, "gamma_p": 0.0},
    "stfpp": {"gamma_p": 0.0},
    "sstfpp": {},
}

SEMIGROUP_TUPLE = (
    SaigoParams(0.5, -0.2, 0.3),
    SaigoParams(0.7, -0.4, 0.1),
    1.0,
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    command: str
    params: FractionalParams
    variant: str
    times: list[float]
    n_max: int
    u: float
    control: SeriesControl
    format: str
    seed: int
    samples: int


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracpois",
        description="State probabilities and diagnostics of fractional Poisson processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("pmf", "state-probability table with exact tail mass"),
        ("pgf", "probability generating function values"),
        ("survival", "first-waiting-time survival function"),
        ("verify", "run the built-in identity checks, report JSON"),
        ("simulate", "Monte-Carlo histogram vs the closed form"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--variant", choices=VARIANTS)
        p.add_argument("--lam", type=float, help="intensity lambda > 0")
        p.add_argument("--alpha", type=float, help="time-fractional order in (0, 1]")
        p.add_argument("--nu", type=float, help="space-fractional order in (0, 1]")
        p.add_argument("--beta", type=float, help="Saigo beta < 0 (sstfpp only)")
        p.add_argument("--gamma", type=float, dest="gamma_p", help="Saigo gamma (sstfpp only)")
        p.add_argument("-t", type=float, dest="t", help="single time point")
        p.add_argument("--t-start", type=float, dest="t_start")
        p.add_argument("--t-stop", type=float, dest="t_stop")
        p.add_argument("--t-count", type=int, dest="t_count")
        p.add_argument("--n-max", type=int, dest="n_max")
        p.add_argument("--max-k", type=int, dest="max_k")
        p.add_argument("--tol-abs", type=float, dest="tol_abs")
        p.add_argument("--tol-rel", type=float, dest="tol_rel")
        p.add_argument("--term-cap", type=int, dest="term_cap")
        p.add_argument("--format", choices=("csv", "json"))
        if name == "pgf":
            p.add_argument("-u", type=float, dest="u", help="pgf argument, |u| < 1")
        if name == "simulate":
            p.add_argument("--seed", type=int)
            p.add_argument("--samples", type=int)
    return parser


def _load_env_config() -> dict:
    path = os.environ.get("FRACPOIS_CONFIG")
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"FRACPOIS_CONFIG: cannot read {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError("FRACPOIS_CONFIG: top-level JSON value must be an object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ParameterError(f"FRACPOIS_CONFIG: unknown keys {sorted(unknown)}")
    return data


def _resolve(args: argparse.Namespace) -> RunConfig:
    # Explicit values (config file, then flags on top) are distinguished from
    # built-in defaults: a variant may override a default silently, but an
    # explicitly requested value it disagrees with is an error.
    explicit = _load_env_config()
    for key, value in vars(args).items():
        if key != "command" and value is not None:
            explicit[key] = value
    merged = {**DEFAULTS, **explicit}

    variant = merged["variant"]
    pinned = dict(PINNED[variant])
    fields = {"lam": merged["lam"]}
    for name in ("alpha", "nu", "beta", "gamma_p"):
        if name in pinned:
            given = explicit.get(name)
            if given is not None and not math.isclose(given, pinned[name], abs_tol=1e-12):
                raise ParameterError(
                    f"--{name.replace('_p', '')} = {given} conflicts with "
                    f"variant {variant} (requires {pinned[name]})"
                )
            fields[name] = pinned[name]
        elif merged[name] is not None:
            fields[name] = merged[name]
    params = FractionalParams(**fields)
    if variant != "sstfpp" and params.variant != variant:
        raise ParameterError(
            f"parameters classify as {params.variant!r}, not the requested {variant!r}"
        )

    if merged["t"] is not None:
        times = [float(merged["t"])]
    else:
        start = float(merged["t_start"])
        stop = float(merged["t_stop"]) if merged["t_stop"] is not None else start
        count = int(merged["t_count"])
        if count < 1:
            raise ParameterError(f"--t-count must be >= 1, got {count}")
        if count == 1:
            times = [start]
        else:
            step = (stop - start) / (count - 1)
            times = [start + i * step for i in range(count)]
    if any(t < 0.0 or not math.isfinite(t) for t in times):
        raise ParameterError("time points must be finite and >= 0")

    control = SeriesControl(
        max_k=int(merged["max_k"]),
        tol_abs=float(merged["tol_abs"]),
        tol_rel=float(merged["tol_rel"]),
        term_cap=int(merged["term_cap"]),
    )
    n_max = int(merged["n_max"])
    if n_max < 0:
        raise ParameterError(f"--n-max must be >= 0, got {n_max}")
    return RunConfig(
        command=args.command,
        params=params,
        variant=variant,
        times=times,
        n_max=n_max,
        u=float(merged["u"]),
        control=control,
        format=str(merged["format"]),
        seed=int(merged["seed"]),
        samples=int(merged["samples"]),
    )


def _params_dict(cfg: RunConfig) -> dict:
    p = cfg.params
    return {
        "variant": cfg.variant,
        "lam": p.lam,
        "alpha": p.alpha,
        "nu": p.nu,
        "beta": p.beta,
        "gamma_p": p.gamma_p,
    }


def _cmd_pmf(cfg: RunConfig) -> tuple[str, int]:
    rows = []
    for t in cfg.times:
        tail = pmf_tail_mass(cfg.params, t, cfg.n_max, cfg.control)
        for n in range(cfg.n_max + 1):
            rows.append((t, n, pmf(cfg.params, t, n, cfg.control), tail))
    if cfg.format == "json":
        body = json.dumps(
            {
                "params": _params_dict(cfg),
                "rows": [
                    {"t": t, "n": n, "p": p, "tail_mass": m} for t, n, p, m in rows
                ],
            }
        )
        return body + "\n", 0
    lines = ["t,n,p,tail_mass"]
    lines += [f"{_fmt(t)},{n},{_fmt(p)},{_fmt(m)}" for t, n, p, m in rows]
    return "\n".join(lines) + "\n", 0


def _cmd_pgf(cfg: RunConfig) -> tuple[str, int]:
    rows = [(t, cfg.u, sstfpp_pgf(cfg.params, cfg.u, t, cfg.control)) for t in cfg.times]
    if cfg.format == "json":
        body = json.dumps(
            {
                "params": _params_dict(cfg),
                "rows": [{"t": t, "u": u, "g": g} for t, u, g in rows],
            }
        )
        return body + "\n", 0
    lines = ["t,u,g"] + [f"{_fmt(t)},{_fmt(u)},{_fmt(g)}" for t, u, g in rows]
    return "\n".join(lines) + "\n", 0


def _cmd_survival(cfg: RunConfig) -> tuple[str, int]:
    rows = [(t, waiting_survival(cfg.params, t, cfg.control)) for t in cfg.times]
    if cfg.format == "json":
        body = json.dumps(
            {
                "params": _params_dict(cfg),
                "rows": [{"t": t, "survival": s} for t, s in rows],
            }
        )
        return body + "\n", 0
    lines = ["t,survival"] + [f"{_fmt(t)},{_fmt(s)}" for t, s in rows]
    return "\n".join(lines) + "\n", 0


def _cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    params, control = cfg.params, cfg.control
    times = cfg.times
    checks: list[dict] = []

    def add(name: str, residual: float, threshold: float, passed: bool) -> None:
        checks.append(
            {"name": name, "residual": residual, "threshold": threshold, "pass": passed}
        )

    r = max(
        truncated_normalization_residual(params, t, cfg.n_max, control.max_k)
        for t in times
    )
    add("normalization", r, 1e-6, r <= 1e-6)

    r = adm_closed_form_diff(params, min(cfg.n_max, 5), min(control.max_k, 10), control)
    add("adm_closed_form", r, 1e-10, r <= 1e-10)

    r = max(
        kolmogorov_residual(params, t, n, control.max_k, control)
        for t in times
        for n in range(min(cfg.n_max, 5) + 1)
    )
    add("kolmogorov", r, 1e-8, r <= 1e-8)

    r = composition_tuples_residual(params)
    add("composition", r, 1e-10, r <= 1e-10)

    check = semigroup_counterexample(*SEMIGROUP_TUPLE)
    rel = abs(check.lhs - check.rhs) / max(abs(check.lhs), abs(check.rhs))
    # This check passes when the residual EXCEEDS the threshold: the two
    # operator orders are supposed to disagree.
    add("semigroup_counterexample_differs", rel, 1e-3, rel > 1e-3)

    body = json.dumps({"checks": checks, "params": _params_dict(cfg)}, indent=2)
    ok = all(c["pass"] for c in checks)
    return body + "\n", 0 if ok else 1


def _cmd_simulate(cfg: RunConfig) -> tuple[str, int]:
    t = cfg.times[0]
    emp = empirical_pmf(cfg.params, t, cfg.samples, cfg.n_max, cfg.seed)
    stat, pvalue, dof = chi_square_gof(emp, cfg.control)
    rows = []
    for n in range(cfg.n_max + 1):
        closed = pmf(cfg.params, t, n, cfg.control)
        freq = emp.frequency(n)
        rows.append((n, freq, closed, abs(freq - closed)))
    if cfg.format == "json":
        body = json.dumps(
            {
                "params": _params_dict(cfg),
                "t": t,
                "samples": cfg.samples,
                "seed": cfg.seed,
                "rows": [
                    {"n": n, "empirical": e, "closed_form": c, "abs_diff": d}
                    for n, e, c, d in rows
                ],
                "chi_square": stat,
                "p_value": pvalue,
                "dof": dof,
            }
        )
        return body + "\n", 0
    lines = ["n,empirical,closed_form,abs_diff"]
    lines += [f"{n},{_fmt(e)},{_fmt(c)},{_fmt(d)}" for n, e, c, d in rows]
    lines.append(f"# chi_square={_fmt(stat)}")
    lines.append(f"# p_value={_fmt(pvalue)}")
    lines.append(f"# dof={dof}")
    return "\n".join(lines) + "\n", 0


_COMMANDS = {
    "pmf": _cmd_pmf,
    "pgf": _cmd_pgf,
    "survival": _cmd_survival,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        body, code = _COMMANDS[args.command](cfg)
    except ParameterError as exc:
        print(f"fracpois: parameter error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"fracpois: convergence failure: {exc}", file=sys.stderr)
        return 3
    except UnsupportedVariantError as exc:
        print(f"fracpois: unsupported variant: {exc}", file=sys.stderr)
        return 4
    sys.stdout.write(body)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
