"""Command line entry point: ``stathorizon <subcommand>``."""
import argparse
import json
import os
import sys

import numpy as np

from . import busemann_scaling as bs
from . import horizon as hz
from . import lattice_lpp as lp
from . import suites
from . import verify as vf
from .errors import StatHorizonError, UsageError
from .queueing import Sequence

KNOWN_KEYS = {"suite", "seed", "replicas", "out", "parallelism"}


def read_config(path):
    """Flat ``key = value`` file; '#' starts a comment."""
    conf = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            conf[k] = _parse(v)
    return conf


def _parse(v):
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    if "," in v:
        return tuple(_parse(s.strip()) for s in v.split(","))
    return v


def _floats(s):
    return [float(v) for v in s.split(",") if v.strip()]


def _settings(args):
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for k in KNOWN_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            conf[k] = v
    params = {k: v for k, v in conf.items() if k not in KNOWN_KEYS}
    return conf, params


def _out_dir(conf):
    out = conf.get("out") or "."
    os.makedirs(out, exist_ok=True)
    return out


def write_sequence(path, values):
    Sequence((0, len(values) - 1), np.asarray(values, dtype=float)).to_csv(path)


def run_experiment(suite, seed=0, replicas=None, out=".", parallelism=1, params=None):
    """Run one suite, write per-replica CSVs and the report JSON; return (exit code, result)."""
    res = suites.run_suite(suite, seed, replicas, parallelism, params)
    os.makedirs(out, exist_ok=True)
    for name, vals in res.per_replica.items():
        write_sequence(os.path.join(out, f"{suite}_{name}.csv"), vals)
    for name, obj in res.artifacts.items():
        if isinstance(obj, hz.HorizonSample):
            obj.to_json(os.path.join(out, f"{suite}_{name}.json"))
            _horizon_csv(obj, os.path.join(out, f"{suite}_{name}.csv"))
    table = vf.emit_report(res.reports, os.path.join(out, f"{suite}_report.json"))
    return (0 if res.passed else 1), res, table


def _horizon_csv(sample, path):
    with open(path, "w") as fh:
        fh.write("x," + ",".join(f"xi={lp.fmt_real(v)}" for v in sample.directions) + "\n")
        for j, x in enumerate(sample.grid.x):
            fh.write(lp.fmt_real(x) + "," + ",".join(lp.fmt_real(ln.values[j]) for ln in sample.lines) + "\n")


# ------------------------------------------------------------ subcommands --

def cmd_verify(args):
    conf, params = _settings(args)
    suite = args.suite_name or conf.get("suite")
    if not suite:
        raise UsageError("no suite given")
    code, res, table = run_experiment(suite, int(conf.get("seed", 0)), conf.get("replicas"),
                                      _out_dir(conf), int(conf.get("parallelism", 1)), params)
    sys.stdout.write(table)
    return code


def cmd_dimension(args):
    args.suite_name = "dimension"
    return cmd_verify(args)


def cmd_sample_lpp(args):
    conf, _ = _settings(args)
    out = _out_dir(conf)
    seed = int(conf.get("seed", 0))
    f = lp.sample_weight_field(seed, (0, 0), args.width, args.height)
    tab = lp.passage_table(f, (0, 0))
    tab.to_csv(os.path.join(out, "passage.csv"))
    lp.trace_geodesic(tab, (args.width - 1, args.height - 1)).to_csv(os.path.join(out, "geodesic.csv"))
    print(f"d = {lp.fmt_real(tab.values[-1, -1])}")
    return 0


def cmd_sample_horizon(args):
    conf, _ = _settings(args)
    out = _out_dir(conf)
    g = _floats(args.grid)
    s = hz.sample_horizon(_floats(args.directions), hz.Grid(*g), int(conf.get("seed", 0)))
    s.to_json(os.path.join(out, "horizon.json"))
    for i, ln in enumerate(s.lines):
        ln.to_csv(os.path.join(out, f"line{i + 1}.csv"))
    if s.edge_flag:
        print("warning: a half-line supremum reached the left grid edge", file=sys.stderr)
    return 0


def cmd_busemann(args):
    conf, _ = _settings(args)
    out = _out_dir(conf)
    seed = int(conf.get("seed", 0))
    pairs = [((k, 0), (k + 1, 0)) for k in range(args.length)]
    e = bs.busemann_estimate(args.rho, pairs, seed=seed)
    write_sequence(os.path.join(out, "busemann_increments.csv"), [v for _, v in e.pairs])
    print(f"n = {e.n_used}, stabilized = {e.stabilized}")
    return 0


def cmd_report(args):
    reports = [r for p in args.files for r in vf.load_reports(p)]
    if not reports:
        raise UsageError("no reports found")
    sys.stdout.write(vf.summary_table(reports))
    return 0 if all(r.passed for r in reports) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--suite")
    common.add_argument("--seed", type=int)
    common.add_argument("--replicas", type=int)
    common.add_argument("--out")
    common.add_argument("--parallelism", type=int)
    common.add_argument("--config")
    p = argparse.ArgumentParser(prog="stathorizon", description="stationary horizon and LPP Monte Carlo")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a registered suite")
    v.add_argument("suite_name", nargs="?", help=", ".join(suites.REGISTRY))
    v.set_defaults(fn=cmd_verify)
    d = sub.add_parser("dimension", parents=[common], help="box dimension of jump supports")
    d.set_defaults(fn=cmd_dimension)
    s = sub.add_parser("sample-lpp", parents=[common], help="passage table and geodesic")
    s.add_argument("--width", type=int, default=64)
    s.add_argument("--height", type=int, default=64)
    s.set_defaults(fn=cmd_sample_lpp)
    h = sub.add_parser("sample-horizon", parents=[common], help="sample SH lines")
    h.add_argument("--directions", default="-1,0,1")
    h.add_argument("--grid", default="-8,4,0.0078125", help="min,max,step; write as --grid=-8,4,0.0078125 when min is negative")
    h.set_defaults(fn=cmd_sample_horizon)
    b = sub.add_parser("busemann", parents=[common], help="horizontal Busemann increments")
    b.add_argument("--rho", type=float, default=0.5)
    b.add_argument("--length", type=int, default=20)
    b.set_defaults(fn=cmd_busemann)
    r = sub.add_parser("report", help="summarize report JSON files")
    r.add_argument("files", nargs="+")
    r.set_defaults(fn=cmd_report)
    return p


def main(argv=None):
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args)
    except StatHorizonError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
