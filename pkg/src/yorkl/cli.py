"""Command line front end.

Four subcommands:

  eval        one operator at one point; a single JSON object on stdout
  crosscheck  one dual-route identity; a JSONL report record
  suite       a named battery of identity checks; JSONL or CSV records
  table       density or coefficient tables; JSONL or CSV rows

Typical calls:

  yorkl eval --target yor_spectral --r 1 --t 1
  yorkl crosscheck --target macdonald --tau 1 --x 1 --y 2
  yorkl suite --name polys --nmax 20
  yorkl table --target yor --r 0.5:5:10 --t 1
  yorkl table --target coeffs --nmax 12 --format csv

Check records always carry exactly the keys
{context, lhs, rhs, rel_diff, tolerance, passed}.  Exit status: 0 when every
emitted check passed, 1 when any failed (or an evaluation aborted), 2 for
unusable input (bad flags, config errors, out-of-window parameters).

When YORKL_OUTPUT_DIR is set, output is additionally written to a file in
that directory.  A --config JSON file supplies defaults for the shared flags;
explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import bessel, kl, polys, yor
from .kl import ParameterWindowError, exp_decay
from .quadrature import (
    CrossCheckReport,
    QuadratureError,
    QuadratureSpec,
    make_bound_report,
    make_report,
)

REPORT_KEYS = ("context", "lhs", "rhs", "rel_diff", "tolerance", "passed")

EVAL_PARAMS = {
    "yor_direct": ("r", "t"),
    "yor_spectral": ("r", "t"),
    "bessel_k_imag": ("tau", "x"),
    "poly_eval": ("n", "x"),
    "heat_kernel": ("t", "x", "y"),
    "kl_forward": ("f", "tau"),
}

CROSSCHECK_PARAMS = {
    "yor_kl_image": ("tau", "t"),
    "yor_squared_norm": ("t",),
    "diffusion": ("r", "t"),
    "derivative_bound": ("r", "t", "m"),
    "generating": ("x", "t", "n"),
    "bernoulli": ("n",),
    "poly_identities": ("n",),
    "poly_kl_image": ("n", "tau"),
    "parseval": ("f",),
    "factorization": ("f", "h", "tau"),
    "macdonald": ("tau", "x", "y"),
    "semigroup": ("t1", "t2", "r"),
}

SUITE_NAMES = ("polys", "yor", "kl", "bessel", "all")

TEST_FUNCTIONS = {"exp": exp_decay}


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: str
    params: dict
    spec: QuadratureSpec
    fmt: str
    jobs: int
    output_dir: Optional[Path]
    r_grid: Optional[str] = None
    t_grid: Optional[str] = None
    n_max: int = 12


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", type=Path, help="JSON file with defaults for the flags below")
    shared.add_argument("--rel-tol", type=float, default=None)
    shared.add_argument("--abs-tol", type=float, default=None)
    shared.add_argument("--decades", type=int, default=None,
                        help="truncation depth in log10 decades")
    shared.add_argument("--max-refinements", type=int, default=None)
    shared.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)
    shared.add_argument("--jobs", type=int, default=None)

    points = argparse.ArgumentParser(add_help=False)
    for flag in ("r", "t", "tau", "x", "y", "t1", "t2"):
        points.add_argument(f"--{flag}", type=float, default=None)
    for flag in ("n", "m"):
        points.add_argument(f"--{flag}", type=int, default=None)
    for flag in ("f", "h"):
        points.add_argument(f"--{flag}", choices=sorted(TEST_FUNCTIONS), default=None)

    p = argparse.ArgumentParser(prog="yorkl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", parents=[shared, points], help="evaluate one operator")
    pe.add_argument("--target", required=True, choices=sorted(EVAL_PARAMS))

    pc = sub.add_parser("crosscheck", parents=[shared, points],
                        help="run one dual-route identity check")
    pc.add_argument("--target", required=True, choices=sorted(CROSSCHECK_PARAMS))

    ps = sub.add_parser("suite", parents=[shared], help="run a named check battery")
    ps.add_argument("--name", dest="target", required=True, choices=SUITE_NAMES)
    ps.add_argument("--nmax", type=int, default=12,
                    help="identity depth for the polys battery")

    # table reuses the -r/-t spelling but as grid strings, so it does not
    # inherit the float-typed points parent.
    pt = sub.add_parser("table", parents=[shared], help="emit a value table")
    pt.add_argument("--target", required=True, choices=("yor", "coeffs"))
    pt.add_argument("--r", dest="r_grid", default="0.5:5:10",
                    help="min:max:steps (inclusive) or a single value")
    pt.add_argument("--t", dest="t_grid", default="1",
                    help="min:max:steps (inclusive) or a single value")
    pt.add_argument("--nmax", type=int, default=12)
    return p


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = {}
    if args.config is not None:
        file_cfg = json.loads(Path(args.config).read_text())
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must hold a JSON object")

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, default)

    # Identity batteries default to a shallower truncation: their tolerances
    # sit far above 1e-16 tails and the deep default would only burn time.
    decades_default = 16 if args.command == "suite" else 40
    spec = QuadratureSpec(
        rel_tol=float(pick(args.rel_tol, "rel_tol", 1e-10)),
        abs_tol=float(pick(args.abs_tol, "abs_tol", 1e-14)),
        max_refinements=int(pick(args.max_refinements, "max_refinements", 12)),
        truncation_log_decades=int(pick(args.decades, "decades", decades_default)),
    )
    out_dir = os.environ.get("YORKL_OUTPUT_DIR")
    params = {
        k: getattr(args, k, None)
        for k in ("r", "t", "tau", "x", "y", "t1", "t2", "n", "m", "f", "h")
    }
    return RunConfig(
        command=args.command,
        target=args.target,
        params=params,
        spec=spec,
        fmt=str(pick(args.fmt, "format", "json")),
        jobs=int(pick(args.jobs, "jobs", 1)),
        output_dir=Path(out_dir) if out_dir else None,
        r_grid=getattr(args, "r_grid", None),
        t_grid=getattr(args, "t_grid", None),
        n_max=getattr(args, "nmax", 12),
    )


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(text)])
    if len(parts) != 3:
        raise ValueError(f"grid must be min:max:steps or a single value, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 2 or not lo < hi:
        raise ValueError(f"bad grid {text!r}: need min < max and steps >= 2")
    return np.linspace(lo, hi, n)


def _require(cfg: RunConfig, names: Sequence[str]) -> dict:
    got = {}
    for name in names:
        v = cfg.params.get(name)
        if v is None:
            raise ValueError(f"{cfg.command} {cfg.target} requires --{name}")
        got[name] = v
    return got


def _emit(cfg: RunConfig, lines: List[str], ext: str) -> None:
    for line in lines:
        print(line)
    if cfg.output_dir is not None:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        path = cfg.output_dir / f"{cfg.command}_{cfg.target}.{ext}"
        path.write_text("\n".join(lines) + "\n")
        print(f"yorkl: wrote {path}", file=sys.stderr)


def _report_record(rep: CrossCheckReport) -> dict:
    # numpy scalars sneak in from vector-valued checks; JSON wants builtins
    return {
        "context": rep.context,
        "lhs": float(rep.lhs),
        "rhs": float(rep.rhs),
        "rel_diff": float(rep.rel_diff),
        "tolerance": float(rep.tolerance),
        "passed": bool(rep.passed),
    }


def _format_records(records: List[dict], keys: Sequence[str], fmt: str) -> List[str]:
    if fmt == "json":
        return [json.dumps({k: r[k] for k in keys}) for r in records]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in records:
        w.writerow([str(r[k]).lower() if isinstance(r[k], bool) else r[k] for k in keys])
    return buf.getvalue().splitlines()


def _ordered_parallel(fns: Sequence[Callable[[], object]], jobs: int) -> list:
    if jobs <= 1:
        return [fn() for fn in fns]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        futures = [ex.submit(fn) for fn in fns]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_eval(cfg: RunConfig) -> int:
    p = _require(cfg, EVAL_PARAMS[cfg.target])
    spec = cfg.spec
    out = {"target": cfg.target, "params": {k: v for k, v in p.items()}}
    if cfg.target in ("yor_direct", "yor_spectral"):
        fn = yor.yor_direct if cfg.target == "yor_direct" else yor.yor_spectral
        dp = fn(p["r"], p["t"], spec)
        out.update(value=dp.value, method=dp.method, error_estimate=dp.error_estimate)
    elif cfg.target == "bessel_k_imag":
        out["value"] = bessel.bessel_k_imag(p["tau"], p["x"], spec)
    elif cfg.target == "poly_eval":
        out["value"] = polys.poly_eval(polys.poly_explicit(p["n"]), p["x"])
    elif cfg.target == "heat_kernel":
        out["value"] = kl.heat_kernel(p["t"], p["x"], p["y"], spec).value
    elif cfg.target == "kl_forward":
        out["value"] = kl.kl_forward(TEST_FUNCTIONS[p["f"]](), p["tau"], spec)
    _emit(cfg, [json.dumps(out)], "json")
    return 0


def _run_crosscheck(cfg: RunConfig) -> CrossCheckReport:
    p = _require(cfg, CROSSCHECK_PARAMS[cfg.target])
    spec = cfg.spec
    t = cfg.target
    if t == "yor_kl_image":
        return yor.yor_kl_image(p["tau"], p["t"], spec)
    if t == "yor_squared_norm":
        return yor.yor_squared_norm(p["t"], spec)
    if t == "diffusion":
        return yor.diffusion_residual(p["r"], p["t"], spec)
    if t == "derivative_bound":
        return yor.derivative_bound_check(p["r"], p["t"], p["m"], spec)
    if t == "generating":
        return polys.generating_check(p["x"], p["t"], p["n"])
    if t == "bernoulli":
        return polys.verify_bernoulli_integral(p["n"], spec)
    if t == "poly_identities":
        return polys.verify_identities(p["n"])
    if t == "poly_kl_image":
        return polys.poly_kl_image(p["n"], p["tau"], spec)
    if t == "parseval":
        return kl.parseval_check(TEST_FUNCTIONS[p["f"]](), spec)
    if t == "factorization":
        return kl.factorization_check(
            TEST_FUNCTIONS[p["f"]](), TEST_FUNCTIONS[p["h"]](), p["tau"], spec
        )
    if t == "macdonald":
        return kl.macdonald_check(p["tau"], p["x"], p["y"], spec)
    return kl.semigroup_check(p["t1"], p["t2"], p["r"], spec)


def _cmd_crosscheck(cfg: RunConfig) -> int:
    rep = _run_crosscheck(cfg)
    lines = _format_records([_report_record(rep)], REPORT_KEYS, cfg.fmt)
    _emit(cfg, lines, "jsonl" if cfg.fmt == "json" else "csv")
    return 0 if rep.passed else 1


def _dk_bound_report(tau: float, x: float, delta: float, spec: QuadratureSpec) -> CrossCheckReport:
    h = 1e-5 * x
    d = (bessel.bessel_k_imag(tau, x + h, spec) - bessel.bessel_k_imag(tau, x - h, spec)) / (2 * h)
    bound = math.exp(-delta * tau) * bessel.bessel_k_real(1.0, x * math.cos(delta), spec)
    return make_bound_report(d, bound, f"|dK_itau/dx| tilt bound tau={tau:g} x={x:g} delta={delta:.3f}")


def _suite_entries(name: str, spec: QuadratureSpec,
                   nmax: int = 12) -> List[Callable[[], CrossCheckReport]]:
    entries: List[Callable[[], CrossCheckReport]] = []
    if name in ("polys", "all"):
        entries.append(lambda: polys.verify_identities(nmax))
        entries.append(lambda: polys.generating_check(2.0, 1.0, 20))
        entries.append(lambda: polys.generating_check(1.0, 0.8, 16))
        entries.append(lambda: make_report(
            polys.poly_series_bessel(3, 2.0, 60),
            polys.poly_eval(polys.poly_explicit(3), 2.0),
            1e-8, "series route vs Horner for p_3(2)"))
        entries.append(lambda: polys.verify_bernoulli_integral(1, spec))
        entries.append(lambda: polys.verify_bernoulli_integral(2, spec))
        entries.append(lambda: polys.poly_kl_image(1, 1.0, spec))
        entries.append(lambda: polys.poly_kl_image(2, 1.5, spec))
        for beta in (0.5, 1.0, 1.5):
            def ratio_entry(b=beta):
                r = polys.poly_asymptotic_ratio(25, 1.0, b)
                return CrossCheckReport(
                    lhs=r, rhs=0.0, abs_diff=abs(r), rel_diff=0.0, tolerance=0.0,
                    passed=True,
                    context=f"(informational) candidate-asymptotic ratio n=25 x=1 beta={b:g}")
            entries.append(ratio_entry)
    if name in ("bessel", "all"):
        entries.append(lambda: bessel.check_k_asymptotics([5, 8, 12, 20, 35], 0.0, spec))
        entries.append(lambda: bessel.check_k_asymptotics([0.05, 0.02, 0.01, 0.005], 0.0, spec))
        entries.append(lambda: make_report(
            bessel.bessel_k_real(0.5, 2.0, spec),
            math.sqrt(math.pi / 4.0) * math.exp(-2.0),
            1e-10, "half-integer closed form K_1/2(2)"))
        for tau in (0.5, 2.0, 5.0):
            for x in (0.5, 2.0):
                def kb(tt=tau, xx=x):
                    return make_bound_report(
                        bessel.bessel_k_imag(tt, xx, spec),
                        bessel.bessel_k_real(0.0, xx, spec),
                        f"|K_itau| <= K_0 at tau={tt:g} x={xx:g}")
                entries.append(kb)
        for delta in (0.0, math.pi / 4.0):
            entries.append(lambda d=delta: _dk_bound_report(1.0, 1.0, d, spec))
    if name in ("yor", "all"):
        for r, t in ((0.5, 1.0), (1.0, 1.0), (2.0, 2.0), (5.0, 0.5), (1.0, 5.0)):
            entries.append(lambda rr=r, tt=t: make_report(
                yor.yor_direct(rr, tt, spec).value,
                yor.yor_spectral(rr, tt, spec).value,
                1e-8, f"direct vs spectral at r={rr:g} t={tt:g}"))
        entries.append(lambda: yor.yor_kl_image(1.0, 1.0, spec))
        entries.append(lambda: yor.diffusion_residual(1.0, 1.0, spec))
        entries.append(lambda: yor.diffusion_residual(2.0, 0.5, spec))
        for m in (0, 1, 2):
            entries.append(lambda mm=m: yor.derivative_bound_check(1.0, 1.0, mm, spec))
        entries.append(lambda: make_report(
            yor.yor_polyseries(1.0, 2.0, 8, spec).value,
            yor.yor_spectral(1.0, 2.0, spec).value,
            1e-3, "polyseries K=8 vs spectral at r=1 t=2"))
    if name in ("kl", "all"):
        entries.append(lambda: kl.parseval_check(exp_decay(), spec))
        entries.append(lambda: kl.macdonald_check(0.0, 1.0, 1.0, spec))
        entries.append(lambda: kl.macdonald_check(1.0, 1.0, 2.0, spec))
        entries.append(lambda: kl.macdonald_check(2.5, 0.7, 1.3, spec))
        entries.append(lambda: kl.factorization_check(exp_decay(), exp_decay(), 1.0, spec))
        entries.append(lambda: kl.semigroup_check(0.5, 0.5, 1.0, spec))
        entries.append(lambda: make_report(
            1.0 * kl.heat_kernel(1.0, 1.0, 2.0, spec).value,
            2.0 * kl.heat_kernel(1.0, 2.0, 1.0, spec).value,
            1e-10, "heat kernel x-weighted symmetry t=1"))
        entries.append(lambda: make_report(
            kl.kl_forward(yor.tabulate_density(1.0, spec), 1.0, spec),
            math.exp(-0.5),
            1e-4, "forward transform of tabulated density t=1 at tau=1"))
    return entries


def _cmd_suite(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    reports = _ordered_parallel(_suite_entries(cfg.target, cfg.spec, cfg.n_max), cfg.jobs)
    records = [_report_record(r) for r in reports]
    lines = _format_records(records, REPORT_KEYS, cfg.fmt)
    _emit(cfg, lines, "jsonl" if cfg.fmt == "json" else "csv")
    n_fail = sum(1 for r in reports if not r.passed)
    meta = {"elapsed_s": round(time.perf_counter() - t0, 3),
            "records": len(records), "failed": n_fail}
    print(json.dumps(meta), file=sys.stderr)
    return 0 if n_fail == 0 else 1


def _cmd_table(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    if cfg.target == "coeffs":
        keys = ("n", "k", "coeff")
        records = []
        for n in range(cfg.n_max + 1):
            p = polys.poly_explicit(n)
            for k, c in enumerate(p.coeffs):
                records.append({"n": n, "k": k, "coeff": str(c)})
    else:
        keys = ("r", "t", "value", "error_estimate")
        rs = _parse_grid(cfg.r_grid)
        ts = _parse_grid(cfg.t_grid)
        for t in ts:
            yor._window(float(t), float(rs.max()))
            yor._window(float(t), float(rs.min()))

        def row_batch(t: float):
            vals, errs = yor._spectral_values(rs, t, cfg.spec)
            return [
                {"r": float(r), "t": float(t), "value": float(v), "error_estimate": float(e)}
                for r, v, e in zip(rs, vals, errs)
            ]

        batches = _ordered_parallel([lambda tt=float(t): row_batch(tt) for t in ts], cfg.jobs)
        records = [row for batch in batches for row in batch]
    lines = _format_records(records, keys, cfg.fmt)
    _emit(cfg, lines, "jsonl" if cfg.fmt == "json" else "csv")
    meta = {"elapsed_s": round(time.perf_counter() - t0, 3), "records": len(records)}
    print(json.dumps(meta), file=sys.stderr)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except (OSError, ValueError) as exc:
        print(f"yorkl: config error: {exc}", file=sys.stderr)
        return 2
    handlers = {
        "eval": _cmd_eval,
        "crosscheck": _cmd_crosscheck,
        "suite": _cmd_suite,
        "table": _cmd_table,
    }
    try:
        return handlers[cfg.command](cfg)
    except ParameterWindowError as exc:
        print(f"yorkl: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"yorkl: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, RuntimeError) as exc:
        print(f"yorkl: evaluation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
