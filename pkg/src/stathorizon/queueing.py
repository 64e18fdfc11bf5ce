"""Queueing maps D and S, multiclass stationary measures, level evolution.

A queue on a finite window [a, b]: customer k arrives at F_k (F_a = 0, so
I_a is unused by the arrival process) and needs service omega_k. Departures
F~_l = max_{a<=k<=l} (F_k + omega_k + ... + omega_l), i.e. the Lindley
recursion F~_l = max(F~_{l-1}, F_l) + omega_l. The interdeparture at the
left edge uses F~_{a-1} := F_{a-1} = -I_a, so D(0, I) = I everywhere.
"""
import json
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from ._kernels import lindley
from .errors import DomainError, ParameterError, ShapeError

MU_STREAM = 0x6D75


@dataclass
class Sequence:
    window: tuple
    values: np.ndarray
    edge_flag: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        a, b = self.window
        if b < a or self.values.shape != (b - a + 1,):
            raise ShapeError("sequence length must match its window")

    @property
    def index(self):
        return np.arange(self.window[0], self.window[1] + 1)

    def cumulative(self):
        """F with F(window start) = 0."""
        return np.concatenate(([0.0], np.cumsum(self.values[1:])))

    def to_csv(self, path):
        from .lattice_lpp import fmt_real
        with open(path, "w") as fh:
            fh.write("index,value\n")
            for k, v in zip(self.index, self.values):
                fh.write(f"{k},{fmt_real(v)}\n")


def _check_pair(omega, inter_arrival):
    if tuple(omega.window) != tuple(inter_arrival.window):
        raise ShapeError(f"window mismatch {omega.window} vs {inter_arrival.window}")


def departures(omega, inter_arrival):
    """(F~, F, maximizing index per customer, relative to the window start)."""
    _check_pair(omega, inter_arrival)
    F = inter_arrival.cumulative()
    Ft, arg = lindley(omega.values, F)
    return Ft, F, arg


def _edge_flag(arg, skip):
    # the queue has not emptied since the window opened for a retained customer
    return bool(np.any(arg[skip:] == 0)) if arg.size > skip else False


def queue_D(omega, inter_arrival, skip=1):
    """Interdeparture times; ``edge_flag`` set if a customer past ``skip`` still feels the edge."""
    Ft, F, arg = departures(omega, inter_arrival)
    out = np.empty_like(Ft)
    out[0] = omega.values[0] + inter_arrival.values[0]
    out[1:] = np.diff(Ft)
    return Sequence(omega.window, out, _edge_flag(arg, skip))


def queue_S(omega, inter_arrival, skip=1):
    """Sojourn times J = F~ - F."""
    Ft, F, arg = departures(omega, inter_arrival)
    return Sequence(omega.window, Ft - F, _edge_flag(arg, skip))


# ------------------------------------------------------------- multiclass --

@dataclass
class MulticlassState:
    rates: tuple
    window: tuple
    components: list

    def __post_init__(self):
        check_rates(self.rates)
        if len(self.components) != len(self.rates):
            raise ShapeError("one component per rate")
        n = self.window[1] - self.window[0] + 1
        self.components = [np.asarray(c, dtype=float) for c in self.components]
        if any(c.shape != (n,) for c in self.components):
            raise ShapeError("components must share the window")

    def sequence(self, i):
        return Sequence(self.window, self.components[i])

    def to_json(self, path=None):
        doc = {"rates": list(map(float, self.rates)), "window": list(map(int, self.window)),
               "components": [c.tolist() for c in self.components]}
        s = json.dumps(doc)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(s)
        return s

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(tuple(doc["rates"]), tuple(doc["window"]), doc["components"])


def check_rates(rates):
    r = np.asarray(rates, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ParameterError("need at least one rate")
    if np.any(r <= 0) or np.any(r >= 1):
        raise ParameterError("rates must lie in (0,1)")
    if np.any(np.diff(r) >= 0):
        raise ParameterError("rates must be strictly decreasing")


def relaxation(service_rate, arrival_rate):
    """Variance-over-drift^2 time scale of the queue (in customers)."""
    s, a = 1.0 / service_rate, 1.0 / arrival_rate
    return (s * s + a * a) / (a - s) ** 2


def default_burn_in(rates):
    r = list(rates)
    if len(r) < 2:
        return 0
    return int(math.ceil(20 * max(relaxation(r[i], r[i + 1]) for i in range(len(r) - 1))))


def apply_D_chain(seqs):
    """D^(k)(I^1,...,I^k) = D(I^1, D^(k-1)(I^2,...,I^k)); D^(1) is the identity."""
    out = seqs[-1]
    for s in reversed(seqs[:-1]):
        out = queue_D(s, out)
    return out


def multiclass_map(inputs):
    """Component i of the output is D^(i)(I^1, ..., I^i)."""
    return [apply_D_chain(inputs[: i + 1]).values for i in range(len(inputs))]


def sample_mu(rates, window, seed, burn_in=None):
    """Draw the multiclass stationary measure on ``window``.

    Independent Exp(rate_i) sequences are drawn on a window extended
    ``burn_in`` sites to the left, pushed through the multiclass map and
    cropped, so that the anchored left edge is forgotten.
    """
    check_rates(rates)
    a, b = int(window[0]), int(window[1])
    if b < a:
        raise DomainError("empty window")
    B = default_burn_in(rates) if burn_in is None else int(burn_in)
    ext = (a - B, b)
    n = b - a + 1 + B
    g = rng.generator(seed, MU_STREAM, len(rates))
    inputs = [Sequence(ext, g.standard_exponential(n) / r) for r in rates]
    comps = multiclass_map(inputs)
    return MulticlassState(tuple(float(r) for r in rates), (a, b), [c[B:] for c in comps])


def evolve_levels(state, bulk_rows):
    """Push every component through one queue per row: I <- D(row, I)."""
    comps = [state.sequence(i) for i in range(len(state.rates))]
    for row in bulk_rows:
        if tuple(row.window) != tuple(state.window):
            raise ShapeError("bulk row window differs from the state window")
        comps = [queue_D(row, c) for c in comps]
    return MulticlassState(state.rates, state.window, [c.values for c in comps])


def rows_from_field(field, window, levels):
    """Bulk rows 1..levels of a WeightField as Sequences on ``window``."""
    a, b = window
    Y = field.block(a, 1, b - a + 1, levels)
    return [Sequence(window, Y[r]) for r in range(levels)]


def is_increment_ordered(lower, upper, tol=1e-9):
    """lower <=_inc upper for increment sequences: upper - lower >= 0 termwise."""
    return bool(np.all(np.asarray(upper)[1:] - np.asarray(lower)[1:] >= -tol))
