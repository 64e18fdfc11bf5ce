"""Time the hot kernels under the numba and numpy backends.

    python3 benchmarks/bench_backends.py [--repeat 3]

The backend is fixed at import, so each backend runs in its own subprocess.
"""
import argparse
import json
import os
import subprocess
import sys
import time


def bench(repeat):
    import numpy as np

    from stathorizon import backend_name, lattice_lpp as lp, queueing as q, rng
    from stathorizon._kernels import boundary_dp, lindley, lpp_table

    Y = rng.exp_field(1, 0, 0, 1000, 1000)
    omega, F = Y[0].copy(), np.cumsum(Y[1])
    cases = {
        "weights 1000x1000": lambda: rng.exp_field(2, 0, 0, 1000, 1000),
        "point LPP 1000x1000": lambda: lpp_table(Y),
        "boundary DP 1000x1000": lambda: boundary_dp(Y, np.cumsum(Y[0]), np.arange(1, 1001),
                                                     np.cumsum(Y[:, 0]), -np.arange(1, 1001)),
        "lindley x1000": lambda: [lindley(omega, F) for _ in range(1000)],
        "exit point N=1000": lambda: lp.exit_point(3, 1000, 1000, 0.5, -201),
        "sample_mu 3 classes": lambda: q.sample_mu([0.6, 0.5, 0.4], (0, 1999), 4),
    }
    out = {"backend": backend_name(), "times": {}}
    for name, fn in cases.items():
        fn()                                   # compile / warm caches
        best = min(_timed(fn) for _ in range(repeat))
        out["times"][name] = best
    return out


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(bench(args.repeat)))
        return
    res = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, STATHORIZON_BACKEND=backend)
        p = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
                           env=env, capture_output=True, text=True, check=True)
        r = json.loads(p.stdout)
        res[r["backend"]] = r["times"]
    names = list(next(iter(res.values())))
    print(f"{'kernel':<24} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in names:
        a, b = res.get("numba", {}).get(n, float("nan")), res["numpy"][n]
        print(f"{n:<24} {a:>10.4f} {b:>10.4f} {b / a:>8.1f}")


if __name__ == "__main__":
    main()
