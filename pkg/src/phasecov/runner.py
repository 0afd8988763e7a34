"""Scenario execution and CSV output."""

import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .action import (ActionParams, ControlPath, action_functional, cauchy_schwarz_bound,
                     first_integral, lagrangian_initial_state, optimize_path)
from .channels import GAD, evolve
from .errors import ConfigError, PhaseCovError, SingularRateError
from .nonmarkov import zeta_details
from .qsl import holevo_rate_bound, qsl_time_mixed, qsl_time_pure
from .qubit import coherence_l1, mixedness, overlap_pure, tradeoff_mcl

SCENARIO_COLUMNS = ["t", "p1", "abs_alpha", "purity", "C_l1", "M_l", "M_cl", "tau_qsl",
                    "inv_tau_qsl"]


class ScenarioFailure(PhaseCovError):
    """A numerical error raised while computing one row, with its context."""


def format_value(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = f"{x:.12g}"
    return "0" if text == "-0" else text


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    """Write to ``path``, or stdout for ``""``/``-``; returns the text."""
    text = csv_text(header, rows)
    if path in ("", "-", None):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def ordered_map(fn, items, jobs=1):
    """``[fn(x) for x in items]``, spread over ``jobs`` processes, in order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def with_context(what, fn, *args):
    try:
        return fn(*args)
    except PhaseCovError as exc:
        if isinstance(exc, (ConfigError, ScenarioFailure)):
            raise
        raise ScenarioFailure(f"{what}: {type(exc).__name__}: {exc}") from exc


def qsl_from_start(c, s0, t):
    """Speed-limit result for driving ``s0`` from 0 to ``t`` (``None`` at t = 0)."""
    if t <= 0:
        return None
    if s0.is_pure:
        return qsl_time_pure(c, s0, t)
    return qsl_time_mixed(c, s0, 0.0, t)


def zeta_or_nan(c, horizon, seed=0, restarts=5):
    """SSS measure, or NaN when a rate pole lies inside the horizon."""
    if horizon <= 0:
        return math.nan
    try:
        return zeta_details(c, horizon, seed=seed, restarts=restarts).zeta
    except SingularRateError:
        return math.nan


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def _scenario_row(args):
    s, t = args
    return with_context(f"scenario row t={t:.12g}", _scenario_row_inner, s, t)


def _scenario_row_inner(s, t):
    s0 = s.initial_state
    rho = evolve(s.channel, s0, t)
    res = qsl_from_start(s.channel, s0, t)
    tau_qsl = 0.0 if res is None else res.tau_qsl
    inv = math.inf if res is None else holevo_rate_bound(res)
    row = [t, rho.p1, abs(rho.alpha), rho.purity, coherence_l1(rho), mixedness(rho),
           tradeoff_mcl(rho), tau_qsl, inv]
    if s.zeta:
        row.append(zeta_or_nan(s.channel, t, s.seed, s.restarts))
    return row


def run_scenario(s, out=None):
    """Evolve the scenario's state over its grid; one CSV row per time."""
    header = SCENARIO_COLUMNS + (["zeta"] if s.zeta else [])
    rows = ordered_map(_scenario_row, [(s, float(t)) for t in s.grid.values()], s.jobs)
    text = csv_text(header, rows) if out is None else write_csv(out, header, rows)
    return header, rows, text


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

ZETA_COLUMNS = ["horizon", "zeta", "g1_star", "g2_star", "g3_star", "omega_star", "converged"]


def _zeta_row(args):
    s, horizon = args
    return with_context(f"zeta at horizon {horizon:.12g}", _zeta_row_inner, s, horizon)


def _zeta_row_inner(s, horizon):
    if horizon <= 0:
        return [horizon, math.nan, math.nan, math.nan, math.nan, math.nan, False]
    try:
        r = zeta_details(s.channel, horizon, seed=s.seed, restarts=s.restarts)
    except SingularRateError:
        return [horizon, math.nan, math.nan, math.nan, math.nan, math.nan, False]
    g = r.generator
    return [horizon, r.zeta, g.g1s, g.g2s, g.g3s, g.ws, r.converged]


def run_zeta(s, out=None):
    """SSS measure for every grid value taken as the horizon."""
    rows = ordered_map(_zeta_row, [(s, float(t)) for t in s.grid.values()], s.jobs)
    text = csv_text(ZETA_COLUMNS, rows) if out is None else write_csv(out, ZETA_COLUMNS, rows)
    return ZETA_COLUMNS, rows, text


# ---------------------------------------------------------------------------
# action
# ---------------------------------------------------------------------------

def action_setup(a):
    """``(params, channel)`` from the ``action.*`` entries of a scenario.

    Missing rates default to equal gain and loss reaching ``q_f`` at ``tau``;
    a missing ``q_f`` is the value the rates reach at ``tau``.
    """
    theta = a.get("theta", math.pi / 4)
    tau = a.get("tau", 1.0)
    if tau <= 0:
        raise ConfigError("tau must be > 0", key="action.tau")
    have_rates = "gamma" in a and "GammaL" in a
    if ("gamma" in a) != ("GammaL" in a):
        raise ConfigError("give both action.gamma and action.GammaL, or neither",
                          key="action.gamma")
    try:
        if have_rates and "q_f" not in a:
            p = ActionParams.from_gad(theta, a["gamma"], a["GammaL"], tau)
        else:
            q_f = a.get("q_f", 0.75)
            if have_rates:
                gamma, loss = a["gamma"], a["GammaL"]
            else:
                if not 0 < q_f < 1:
                    raise ValueError("q_f must lie in (0, 1)")
                gamma = loss = -math.log1p(-q_f) / tau
            p = ActionParams(theta, gamma, loss, tau, q_f)
    except ValueError as exc:
        raise ConfigError(f"invalid action parameters: {exc}", key="action") from None
    return p, GAD(p.gamma, p.GammaL)


def optimize_action(a):
    """Run the optimizer from the linear path; returns a dict of results."""
    p, channel = action_setup(a)
    intervals = a.get("intervals", 256)
    steps = a.get("steps", 500)
    rate = a.get("rate", 1.0)
    every = a.get("snapshot_every", 0)
    if intervals < 64 or steps < 1 or rate <= 0 or every < 0:
        raise ConfigError("need intervals >= 64, steps >= 1, rate > 0, snapshot_every >= 0",
                          key="action")
    init = ControlPath.linear(p.q_f, p.tau, intervals)
    snapshots = [(0, init.q.copy())]

    def keep(iteration, q):
        if every and iteration % every == 0:
            snapshots.append((iteration, q.copy()))

    path, trace = optimize_path(p, init, steps=steps, rate=rate, callback=keep)
    if snapshots[-1][0] != len(trace) - 1:
        snapshots.append((len(trace) - 1, path.q.copy()))

    s0 = lagrangian_initial_state(p.theta)
    rho_tau = evolve(channel, s0, p.tau)
    sin2 = 1.0 - overlap_pure(s0, rho_tau)
    geometric = qsl_time_pure(channel, s0, p.tau)
    return {
        "params": p, "channel": channel, "init": init, "path": path, "trace": trace,
        "snapshots": snapshots, "sin2": sin2, "bound": cauchy_schwarz_bound(p),
        "geometric_ratio": geometric.ratio, "initial_action": action_functional(init, p),
    }


ACTION_COLUMNS = ["iteration", "action", "tau_a_ratio", "cs_bound"]


def _action_ratio(sin2, a, tau):
    if sin2 == 0.0:
        return 0.0
    return sin2 * sin2 / (a * tau) if a > 0 else math.inf


def run_action(s, out=None):
    """Optimizer trace as CSV; path snapshots go to ``action.path_out`` if set."""
    r = with_context("action optimization", optimize_action, s.action)
    p = r["params"]
    rows = [[k, a, _action_ratio(r["sin2"], a, p.tau), r["bound"]]
            for k, a in enumerate(r["trace"])]
    text = csv_text(ACTION_COLUMNS, rows) if out is None else write_csv(out, ACTION_COLUMNS, rows)
    path_out = s.action.get("path_out")
    if path_out:
        header = ["t"] + [f"q[iter={k}]" for k, _ in r["snapshots"]] + ["first_integral"]
        fi = np.concatenate([[math.nan], first_integral(r["path"], p), [math.nan]])
        cols = [r["path"].grid] + [q for _, q in r["snapshots"]] + [fi]
        write_csv(path_out, header, list(zip(*cols)))
    return ACTION_COLUMNS, rows, text
