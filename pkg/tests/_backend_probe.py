"""Prints kernel outputs, as digests where exact equality is expected; run under each backend."""
import hashlib
import json

import numpy as np

from stathorizon import backend_name, lattice_lpp as lp, queueing as q, rng
from stathorizon._kernels import boundary_dp, lindley, lpp_table, running_max


def h(a):
    return hashlib.sha256(np.ascontiguousarray(a).tobytes()).hexdigest()


f = rng.exp_field(123, -7, 3, 57, 41)
Y = lp.sample_weight_field(5, (0, 0), 80, 60).weights
d, z = boundary_dp(Y[1:, 1:], np.cumsum(Y[0, 1:]), np.arange(1, 80), np.cumsum(Y[1:, 0]), -np.arange(1, 60))
Ft, arg = lindley(Y[0], np.cumsum(Y[1]))
out = {
    "backend": backend_name(),
    "field": h(f),
    "lpp": lpp_table(Y)[::7, ::7].ravel().tolist(),
    "bdp": d[::5, ::5].ravel().tolist(),
    "bdp_labels": h(z),
    "lindley": Ft.tolist(),
    "lindley_arg": h(arg),
    "runmax": h(running_max(Y[2])),
    "exit": [lp.exit_point(s, 60, 60, 0.5, -25) for s in range(6)],
    "mu": np.array(q.sample_mu([0.6, 0.4], (0, 99), 2).components).ravel().tolist(),
}
print(json.dumps(out))
