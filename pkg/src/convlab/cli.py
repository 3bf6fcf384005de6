"""Command-line interface.

Every command prints its JSON report to stdout and, with ``--outdir``, also
writes it to ``<outdir>/<command>.json`` together with CSV tables.  Exit
status: 0 success, 2 when verification is dominated by INDETERMINATE
verdicts, 1 on errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import pluripotential as pp
from .regions import region_from_dict
from .series import SeriesSpec, Verdict, classify, hartogs_joint_check
from .synthesis import (SynthesisReport, decode_point, enumeration_probes, synth_block, synth_enumeration,
                        synth_projective, synth_variety, verify)
from .weights import HFunction, h_to_l, saddulaev_transform, weight_from_dict


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# input helpers

def load_json(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from exc


def load_region(path):
    try:
        return region_from_dict(load_json(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def load_spec(path) -> SeriesSpec:
    try:
        return SeriesSpec.from_dict(load_json(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def parse_scalar(tok: str):
    tok = tok.strip()
    if "/" in tok:
        return Fraction(tok)
    try:
        return Fraction(int(tok))
    except ValueError:
        pass
    try:
        return complex(tok.replace("i", "j"))
    except ValueError as exc:
        raise CliError(f"cannot parse coordinate {tok!r}") from exc


def parse_point(text: str) -> tuple:
    """'1,2' or '0.5+1j,3' or '1/3' into a coordinate tuple."""
    return tuple(parse_scalar(t) for t in text.split(","))


def load_probes(path) -> list[tuple]:
    data = load_json(path)
    if isinstance(data, dict):
        data = data.get("probes", [])
    try:
        return [decode_point(p if isinstance(p, list) else [p]) for p in data]
    except (TypeError, ValueError, IndexError) as exc:
        raise CliError(f"{path}: malformed probe list: {exc}") from exc


def _cx(x) -> list:
    return [[complex(c).real, complex(c).imag] for c in x]


def _jsonable(o):
    if isinstance(o, float) and not math.isfinite(o):
        return "inf" if o > 0 else ("-inf" if o < 0 else "nan")
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.generic):
        return _jsonable(o.item())
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, Fraction):
        return str(o)
    return o


# --------------------------------------------------------------------------
# output

class Output:
    def __init__(self, command: str, outdir: str | None):
        self.command = command
        self.dir = Path(outdir) if outdir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def table(self, name: str, rows: list[list]) -> None:
        if not self.dir:
            return
        with open(self.dir / name, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)

    def report(self, data: dict) -> None:
        text = json.dumps(_jsonable(data), indent=2)
        if self.dir:
            (self.dir / f"{self.command}.json").write_text(text + "\n")
        print(text)


# --------------------------------------------------------------------------
# commands

def cmd_fekete(a, out: Output) -> int:
    E = load_region(a.region)
    cfg = pp.fekete_search(E, a.k, budget=a.budget, seed=a.seed)
    out.table("fekete_points.csv", [["index"] + [f"re{i}" for i in range(cfg.n)] + [f"im{i}" for i in range(cfg.n)]]
              + [[i] + list(np.real(p)) + list(np.imag(p)) for i, p in enumerate(cfg.points)])
    out.table("fekete_history.csv", [["sweep", "logV"]] + [[i, v] for i, v in enumerate(cfg.history)])
    out.report(cfg.to_dict())
    return 0


def cmd_tdiam(a, out: Output) -> int:
    E = load_region(a.region)
    rep = pp.transfinite_diameter(E, a.kmax, budget=a.budget, seed=a.seed)
    out.table("tdiam.csv", [["k", "logV", "d_k"]] + [[k, lv, d] for k, lv, d in zip(rep.ks, rep.logV, rep.d_k)])
    out.report(rep.to_dict())
    return 0


def cmd_capacity(a, out: Output) -> int:
    E = load_region(a.region)
    R = tuple(float(r) for r in a.R.split(","))
    est = pp.capacity(E, k_max=a.kmax, R_list=R, budget=a.budget, seed=a.seed)
    rows = [["k", "R", "L_lower", "c_upper_k"]]
    for (k, r), v in sorted(est.L_table.items()):
        rows.append([k, r, v, 1 / v if v > 0 else "inf"])
    out.table("capacity.csv", rows)
    out.table("capacity_bracket.csv", [["R", "L_R"]] + [[r, v] for r, v in sorted(est.L_R.items())])
    out.report(est.to_dict())
    return 0


def cmd_extremal(a, out: Output) -> int:
    E = load_region(a.region)
    x = parse_point(a.at)
    est = pp.extremal_lower(E, x, k_max=a.kmax, budget=a.budget, seed=a.seed)
    out.table("extremal.csv", [["k", "lower_bound"]] + [[i + 1, v] for i, v in enumerate(est.per_k)])
    out.report({"at": _cx(x), **est.to_dict()})
    return 0


def cmd_ghull(a, out: Output) -> int:
    E = load_region(a.region)
    x = parse_point(a.at)
    rep = pp.ghull_member(E, x, phi_max=a.phi_max, k_max=a.kmax, budget=a.budget, seed=a.seed)
    out.report({"at": _cx(x), **rep.to_dict()})
    return 2 if rep.verdict == pp.HullVerdict.UNRESOLVED else 0


def cmd_bernstein(a, out: Output) -> int:
    E = load_region(a.region)
    rep = pp.bernstein_constant(E, a.degree, trials=a.trials, budget=a.budget, seed=a.seed)
    out.table("bernstein.csv", [["trial", "ratio"]] + [[i, v] for i, v in enumerate(rep.history)])
    out.report(rep.to_dict())
    return 0


def cmd_saddulaev(a, out: Output) -> int:
    try:
        u = weight_from_dict(load_json(a.u))
        if isinstance(u, HFunction):
            u = h_to_l(u)
    except ValueError as exc:
        raise CliError(f"{a.u}: {exc}") from exc
    rng = np.random.Generator(np.random.Philox(key=a.seed))
    n = u.n
    E_samples = []
    if a.region:
        E_samples = list(load_region(a.region).sample(a.samples, seed=a.seed))
    z = rng.normal(size=(a.samples, n)) + 1j * rng.normal(size=(a.samples, n))
    z *= a.radius * rng.uniform(size=(a.samples, 1)) / np.linalg.norm(z, axis=1, keepdims=True)
    _, rep = saddulaev_transform(u, E_samples, list(z), j_max=a.jmax)
    rows = [["set", "index", "v", "log_plus", "below_log_plus", "monotone_tail"]]
    for name in ("E", "off"):
        for i, r in enumerate(rep[name]):
            rows.append([name, i, r["v"], r["log_plus"], int(r["below_log_plus"]), int(r["monotone_tail"])])
    out.table("saddulaev.csv", rows)
    if not a.full:
        rep = {k: v for k, v in rep.items() if k not in ("E", "off")}
    out.report(rep)
    return 0


def _probe_list(a):
    return load_probes(a.probes) if a.probes else None


def _report_status(rep: SynthesisReport) -> int:
    if rep.indeterminate_fraction > 0.5:
        return 2
    return 0


def cmd_synthesize(a, out: Output) -> int:
    target = load_region(a.target)
    probes = _probe_list(a)
    count = 0 if probes is not None else a.probe_count
    if a.mode == "variety":
        if target.kind != "VARIETY" or len(target.polys) != 1:
            raise CliError("variety mode needs a VARIETY target with one polynomial")
        rep = synth_variety(target.polys[0], horizon=a.horizon, probes=probes, probe_count=count,
                            window=a.window, eps=a.eps, seed=a.seed)
    elif a.mode == "enumeration":
        if probes is None:
            probes = enumeration_probes(target, count, a.window, a.seed)
        rep = synth_enumeration(target, levels=a.levels, probes=probes, seed=a.seed)
    elif a.mode == "block":
        rep = synth_block(target, window=a.window, eps=a.eps, m_max=a.mmax, probes=probes,
                          probe_count=count, seed=a.seed)
    else:
        rep = synth_projective(target, eps=a.eps, m_max=a.mmax, probes=probes, probe_count=count,
                               seed=a.seed)
    spec_text = json.dumps(rep.spec.to_dict(), indent=2) + "\n"
    if a.out:
        Path(a.out).write_text(spec_text)
    out.table("margins.csv", rep.margin_rows())
    out.report(rep.to_dict(include_spec=not a.out))
    if not rep.all_correct:
        return 2 if rep.indeterminate_fraction > 0.5 else 1
    return _report_status(rep)


def cmd_verify(a, out: Output) -> int:
    spec = load_spec(a.spec)
    target = load_region(a.target)
    probes = load_probes(a.probes)
    rep = verify(spec, target, probes, horizon=a.horizon)
    out.table("margins.csv", rep.margin_rows())
    out.report(rep.to_dict(include_spec=False))
    status = _report_status(rep)
    if status == 0 and not rep.notes["consistent"]:
        return 1
    return status


def cmd_conv_test(a, out: Output) -> int:
    spec = load_spec(a.spec)
    x = parse_point(a.at)
    xc = np.array([complex(c) for c in x])
    stream = spec.restrict(xc, a.horizon)
    if spec.projective:
        stream.log_abs[:] = stream.log_abs - stream.exponents * math.log(float(np.linalg.norm(xc)))
    v = classify(stream, horizon=a.horizon)
    if out.dir:
        stream.to_csv(out.dir / "stream.csv")
    out.report({"at": _cx(x), "verdict": v.to_dict()})
    return 2 if v.kind == Verdict.INDETERMINATE else 0


def cmd_hartogs(a, out: Output) -> int:
    spec = load_spec(a.spec)
    v = hartogs_joint_check(spec, a.horizon, seed=a.seed)
    out.report({"verdict": v.to_dict()})
    return 2 if v.kind == Verdict.INDETERMINATE else 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="convlab", description="Convergence sets, capacities and series synthesis.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for every random draw")
    common.add_argument("--outdir", help="directory for the JSON report and CSV tables")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    s = add("fekete", cmd_fekete, "approximate Fekete configuration of degree k")
    s.add_argument("--region", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--budget", type=int, default=pp.DEFAULT_BUDGET)

    s = add("tdiam", cmd_tdiam, "transfinite diameter d_k table and extrapolation")
    s.add_argument("--region", required=True)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--budget", type=int, default=pp.DEFAULT_BUDGET)

    s = add("capacity", cmd_capacity, "capacity bracket from witness polynomials")
    s.add_argument("--region", required=True)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--R", default="4,8,16,32")
    s.add_argument("--budget", type=int, default=pp.DEFAULT_BUDGET)

    s = add("extremal", cmd_extremal, "lower bound for the extremal function at a point")
    s.add_argument("--region", required=True)
    s.add_argument("--at", required=True, help="comma separated coordinates, e.g. 2 or 1+1j,0")
    s.add_argument("--kmax", type=int, default=12)
    s.add_argument("--budget", type=int, default=200)

    s = add("ghull", cmd_ghull, "G-hull membership verdict")
    s.add_argument("--region", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--kmax", type=int, default=16)
    s.add_argument("--budget", type=int, default=50)
    s.add_argument("--phi-max", type=float, default=10.0)

    s = add("bernstein", cmd_bernstein, "Bernstein-Markov constant search")
    s.add_argument("--region", required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--budget", type=int, default=pp.DEFAULT_BUDGET)

    s = add("saddulaev", cmd_saddulaev, "glued weight v built from u")
    s.add_argument("--u", required=True, help="weight function JSON")
    s.add_argument("--region", help="pole set samples (region JSON)")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--radius", type=float, default=4.0)
    s.add_argument("--jmax", type=int, default=40)
    s.add_argument("--full", action="store_true", help="include per-point rows in the JSON")

    s = add("synthesize", cmd_synthesize, "build a series with a prescribed convergence set")
    s.add_argument("--target", required=True)
    s.add_argument("--mode", choices=("variety", "enumeration", "block", "projective"), default="variety")
    s.add_argument("--window", type=float, default=2.0)
    s.add_argument("--eps", type=float, default=0.05)
    s.add_argument("--horizon", type=int, default=64)
    s.add_argument("--mmax", type=int, default=8)
    s.add_argument("--levels", type=int, default=16)
    s.add_argument("--probes", help="JSON list of probe points")
    s.add_argument("--probe-count", type=int, default=200)
    s.add_argument("--out", help="write the series JSON here")

    s = add("verify", cmd_verify, "independent E_m membership check of a series")
    s.add_argument("--spec", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--probes", required=True)
    s.add_argument("--horizon", type=int)

    s = add("conv-test", cmd_conv_test, "root-test verdict of a series at a point")
    s.add_argument("--spec", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--horizon", type=int, default=64)

    s = add("hartogs", cmd_hartogs, "joint root test of the series in (s, t)")
    s.add_argument("--spec", required=True)
    s.add_argument("--horizon", type=int, default=64)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, Output(args.command, args.outdir))
    except (CliError, ValueError, NotImplementedError) as exc:
        print(f"convlab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
