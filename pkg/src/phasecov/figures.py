"""Built-in figure presets.

Each preset is a table of named parameters (all overridable) plus a row
function evaluated on a sweep grid. Rows are independent and can run in
parallel; the output keeps grid order.

Sweeps and their x-variables:

* ``1a``-``1c``, ``2a``-``2c``: coupling ``kappa`` at fixed driving time
  ``tau``; the first column is ``kappa_tau``.
* ``3a``-``3c``: coupling ratio ``R`` of the thermal model.
* ``4a``-``4c``: driving time ``tau``; ``4a``/``4b`` carry one column per
  initial state ``r``.
* ``5a``/``5b``: start time ``tau`` of a mixed-state drive of length ``tau_d``.
* ``6``: optimizer iteration.

For parametric figures (``tau_qsl`` against ``zeta`` or ``M_cl``) the sweep
variable stays as the leading column and the plotted x-variable appears once
per curve, named ``zeta[curve]`` or ``M_cl[curve]``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channels import MOUN, NMAD, OUN, RTN, Eternal, Phenomenological, combine, evolve
from .errors import ConfigError
from .qsl import holevo_rate_bound, qsl_time_mixed, qsl_time_pure
from .qubit import BlochVector, state_from_bloch, state_from_r, state_from_theta, tradeoff_mcl
from .runner import (_action_ratio, format_value, ordered_map, optimize_action, with_context,
                     zeta_or_nan)

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Figure:
    fid: str
    x_name: str
    defaults: dict
    curves: object
    row: object
    columns: tuple


def _floats(text):
    return [float(v) for v in str(text).split(",")]


def _resolve(defaults, overrides):
    params = dict(defaults)
    for key, value in overrides.items():
        if key not in params:
            raise ConfigError(f"unknown parameter for this figure (known: {', '.join(sorted(params))})",
                              key=key)
        params[key] = value
    out = {}
    for key, value in params.items():
        if isinstance(defaults[key], str):
            try:
                out[key] = _floats(value)
            except ValueError:
                raise ConfigError(f"'{value}' is not a list of numbers", key=key) from None
        else:
            try:
                out[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"'{value}' is not a number", key=key) from None
            if math.isnan(out[key]):
                raise ConfigError("NaN is not allowed", key=key)
    if "sweep.points" in out:
        n = out["sweep.points"]
        if n < 2 or n != int(n):
            raise ConfigError("need an integer number of points >= 2", key="sweep.points")
        if not out["sweep.stop"] > out["sweep.start"]:
            raise ConfigError("sweep must be strictly increasing", key="sweep.stop")
    return out


# ---------------------------------------------------------------------------
# shared row pieces
# ---------------------------------------------------------------------------

def _pure_qsl(c, s0, tau):
    return qsl_time_pure(c, s0, tau)


def _curve_columns(names, quantities):
    return [f"{q}[{n}]" for n in names for q in quantities]


def _coupling_row(params, x, curves, quantities):
    tau = params["tau"]
    kappa = x / tau
    s0 = state_from_theta(params["theta"])
    row = [x]
    for name, build in curves.items():
        c = build(kappa, params)
        res = _pure_qsl(c, s0, tau)
        for q in quantities:
            if q == "tau_qsl":
                row.append(res.tau_qsl)
            elif q == "inv_tau_qsl":
                row.append(holevo_rate_bound(res))
            elif q == "zeta":
                row.append(zeta_or_nan(c, tau, int(params["seed"]), int(params["zeta.restarts"])))
            elif q == "M_cl":
                row.append(tradeoff_mcl(evolve(c, s0, tau)))
    return row


# ---------------------------------------------------------------------------
# figure 1: amplitude damping with telegraph noise
# ---------------------------------------------------------------------------

def _nmad(kappa, p):
    return NMAD(p["nmad.kappa_ratio"] * kappa, p["nmad.l_ratio"] * kappa)


FIG1_CURVES = {
    "nMRTN": lambda k, p: combine(_nmad(k, p), RTN(p["rtn.alpha_nm_ratio"] * k, p["rtn.eta_ratio"] * k)),
    "MRTN": lambda k, p: combine(_nmad(k, p), RTN(p["rtn.alpha_m_ratio"] * k, p["rtn.eta_ratio"] * k)),
    "nMAD": lambda k, p: _nmad(k, p),
}

FIG2_CURVES = {
    "nMAD+OUN": lambda k, p: combine(_nmad(k, p), OUN(p["oun.p_ratio"] * k, p["oun.m_ratio"] * k)),
    "nMAD+MOUN": lambda k, p: combine(_nmad(k, p), MOUN(p["moun.p"])),
    "nMAD": lambda k, p: _nmad(k, p),
}

COMMON = {"tau": 1.0, "theta": HALF_PI, "zeta.restarts": 5, "seed": 0}

FIG1_DEFAULTS = {**COMMON, "sweep.start": 0.1, "sweep.stop": 10.0, "sweep.points": 100,
                 "nmad.kappa_ratio": 1.0, "nmad.l_ratio": 0.1, "rtn.eta_ratio": 1.0,
                 "rtn.alpha_nm_ratio": 1.0, "rtn.alpha_m_ratio": 0.1}

FIG2_DEFAULTS = {**COMMON, "sweep.start": 0.1, "sweep.stop": 10.0, "sweep.points": 100,
                 "nmad.kappa_ratio": 1.0, "nmad.l_ratio": 0.1, "oun.p_ratio": 0.1,
                 "oun.m_ratio": 1.0, "moun.p": 0.1}


# ---------------------------------------------------------------------------
# figure 3: thermal model
# ---------------------------------------------------------------------------

FIG3_DEFAULTS = {**COMMON, "sweep.start": 0.05, "sweep.stop": 1.5, "sweep.points": 30,
                 "temperatures": "0,0.5", "s": 4.0, "c0": 1.0, "omega_c": 1.0, "upsilon": 1.0,
                 "nu0": 1.0}


def _fig3_curves(p):
    curves = {}
    for T in p["temperatures"]:
        curves[f"T={format_value(T)}"] = (lambda R, q, T=T: Phenomenological(
            R, T, q["nu0"], q["s"], q["upsilon"], q["omega_c"], q["c0"]))
    return curves


def _fig3_row(params, x, quantities):
    tau = params["tau"]
    s0 = state_from_theta(params["theta"])
    row = [x]
    for build in _fig3_curves(params).values():
        c = build(x, params)
        res = _pure_qsl(c, s0, tau)
        for q in quantities:
            if q == "tau_qsl":
                row.append(res.tau_qsl)
            elif q == "zeta":
                row.append(zeta_or_nan(c, tau, int(params["seed"]), int(params["zeta.restarts"])))
            elif q == "M_cl":
                row.append(tradeoff_mcl(evolve(c, s0, tau)))
    return row


# ---------------------------------------------------------------------------
# figure 4: eternally indivisible channel, pure states
# ---------------------------------------------------------------------------

FIG4_DEFAULTS = {"b": 0.5, "nu": 1.0, "sweep.start": 0.1, "sweep.stop": 5.0, "sweep.points": 50,
                 "r": "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"}
FIG4C_DEFAULTS = {"b": 0.5, "nu": 1.0, "sweep.start": 0.1, "sweep.stop": 10.0,
                  "sweep.points": 100, "theta": HALF_PI}


def _fig4_row(params, x, quantity):
    c = Eternal(params["b"], params["nu"])
    row = [x]
    for r in params["r"]:
        res = _pure_qsl(c, state_from_r(r), x)
        row.append(res.ratio if quantity == "ratio" else holevo_rate_bound(res))
    return row


def _fig4c_row(params, x):
    c = Eternal(params["b"], params["nu"])
    s0 = state_from_theta(params["theta"])
    return [x, tradeoff_mcl(evolve(c, s0, x)), _pure_qsl(c, s0, x).tau_qsl]


# ---------------------------------------------------------------------------
# figure 5: eternally indivisible channel, mixed state
# ---------------------------------------------------------------------------

FIG5_DEFAULTS = {"b": 0.5, "nu": 1.0, "tau_d": 2.0, "bloch": "0.2,0.2,0.2", "sweep.start": 0.0,
                 "sweep.stop": 3.0, "sweep.points": 31, "zeta.restarts": 5, "seed": 0}


def _fig5_row(params, x, with_zeta):
    c = Eternal(params["b"], params["nu"])
    if len(params["bloch"]) != 3:
        raise ConfigError("Bloch vector needs three components", key="bloch")
    s0 = state_from_bloch(BlochVector(*params["bloch"]))
    s_tau = evolve(c, s0, x)
    res = qsl_time_mixed(c, s_tau, x, params["tau_d"])
    if not with_zeta:
        return [x, res.tau_qsl]
    horizon = x + params["tau_d"]
    return [x, zeta_or_nan(c, horizon, int(params["seed"]), int(params["zeta.restarts"])),
            res.tau_qsl]


# ---------------------------------------------------------------------------
# figure 6: action speed limit
# ---------------------------------------------------------------------------

FIG6_DEFAULTS = {"theta": math.pi / 4, "q_f": 0.75, "tau": 1.0, "gain_loss_ratio": 1.0,
                 "intervals": 256, "steps": 500, "rate": 1.0}
FIG6_COLUMNS = ("iteration", "action", "tau_a_ratio", "tau_a_ratio_unoptimized",
                "geometric_ratio_squared", "cs_bound")


def _fig6_rows(params):
    q_f, tau, ratio = params["q_f"], params["tau"], params["gain_loss_ratio"]
    if not 0 < q_f < 1 or tau <= 0 or ratio <= 0:
        raise ConfigError("need 0 < q_f < 1, tau > 0 and gain_loss_ratio > 0", key="q_f")
    # constant rates whose amplitude-damping parameter reaches q_f at tau
    k = -math.log1p(-q_f) / tau
    a = {"theta": params["theta"], "tau": tau, "q_f": q_f,
         "gamma": 2 * k * ratio / (1 + ratio), "GammaL": 2 * k / (1 + ratio),
         "intervals": int(params["intervals"]), "steps": int(params["steps"]),
         "rate": params["rate"]}
    r = with_context("figure 6 optimization", optimize_action, a)
    unopt = _action_ratio(r["sin2"], r["initial_action"], tau)
    geo = r["geometric_ratio"] ** 2
    return [[i, v, _action_ratio(r["sin2"], v, tau), unopt, geo, r["bound"]]
            for i, v in enumerate(r["trace"])]


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _coupling_figure(fid, defaults, curves, quantities):
    names = list(curves)
    return Figure(fid, "kappa_tau", defaults, curves,
                  lambda p, x: _coupling_row(p, x, curves, quantities),
                  tuple(["kappa_tau"] + _curve_columns(names, quantities)))


FIGURES = {
    "1a": _coupling_figure("1a", FIG1_DEFAULTS, FIG1_CURVES, ["tau_qsl"]),
    "1b": _coupling_figure("1b", FIG1_DEFAULTS, FIG1_CURVES, ["zeta", "tau_qsl", "inv_tau_qsl"]),
    "1c": _coupling_figure("1c", FIG1_DEFAULTS, FIG1_CURVES, ["M_cl", "tau_qsl"]),
    "2a": _coupling_figure("2a", FIG2_DEFAULTS, FIG2_CURVES, ["tau_qsl"]),
    "2b": _coupling_figure("2b", FIG2_DEFAULTS, FIG2_CURVES, ["zeta", "tau_qsl"]),
    "2c": _coupling_figure("2c", FIG2_DEFAULTS, FIG2_CURVES, ["M_cl", "tau_qsl"]),
    "3a": Figure("3a", "R", FIG3_DEFAULTS, None, lambda p, x: _fig3_row(p, x, ["tau_qsl"]), ()),
    "3b": Figure("3b", "R", FIG3_DEFAULTS, None,
                 lambda p, x: _fig3_row(p, x, ["zeta", "tau_qsl"]), ()),
    "3c": Figure("3c", "R", FIG3_DEFAULTS, None,
                 lambda p, x: _fig3_row(p, x, ["M_cl", "tau_qsl"]), ()),
    "4a": Figure("4a", "tau", FIG4_DEFAULTS, None, lambda p, x: _fig4_row(p, x, "ratio"), ()),
    "4b": Figure("4b", "tau", FIG4_DEFAULTS, None, lambda p, x: _fig4_row(p, x, "inverse"), ()),
    "4c": Figure("4c", "tau", FIG4C_DEFAULTS, None, _fig4c_row, ("tau", "M_cl", "tau_qsl")),
    "5a": Figure("5a", "tau", FIG5_DEFAULTS, None, lambda p, x: _fig5_row(p, x, False),
                 ("tau", "tau_qsl")),
    "5b": Figure("5b", "tau", FIG5_DEFAULTS, None, lambda p, x: _fig5_row(p, x, True),
                 ("tau", "zeta", "tau_qsl")),
    "6": Figure("6", "iteration", FIG6_DEFAULTS, None, None, FIG6_COLUMNS),
}

FIGURE_IDS = tuple(FIGURES)


def _header(fig, params):
    if fig.columns:
        return list(fig.columns)
    if fig.fid.startswith("3"):
        names = list(_fig3_curves(params))
        quantities = {"3a": ["tau_qsl"], "3b": ["zeta", "tau_qsl"], "3c": ["M_cl", "tau_qsl"]}
        return ["R"] + _curve_columns(names, quantities[fig.fid])
    label = "tau_qsl_ratio" if fig.fid == "4a" else "inv_tau_qsl"
    return ["tau"] + [f"{label}[r={format_value(r)}]" for r in params["r"]]


def _figure_row(args):
    fid, params, x = args
    fig = FIGURES[fid]
    return with_context(f"figure {fid} at {fig.x_name}={x:.12g}", fig.row, params, x)


def figure_parameters(fid, overrides=None, seed=0, points=None):
    """Resolved parameter table for a preset after overrides and flags."""
    if fid not in FIGURES:
        raise ConfigError(f"unknown figure id '{fid}' (known: {', '.join(FIGURE_IDS)})")
    overrides = dict(overrides or {})
    fig = FIGURES[fid]
    if "seed" in fig.defaults:
        overrides.setdefault("seed", seed)
    if points is not None:
        key = "sweep.points" if "sweep.points" in fig.defaults else "steps"
        overrides[key] = points
    return _resolve(fig.defaults, overrides)


def run_figure(fid, overrides=None, seed=0, points=None, jobs=1):
    """``(header, rows)`` for one figure preset.

    ``points`` replaces the sweep resolution (the iteration budget for
    figure 6).
    """
    params = figure_parameters(fid, overrides, seed, points)
    fig = FIGURES[fid]
    if fid == "6":
        return list(FIG6_COLUMNS), _fig6_rows(params)
    xs = np.linspace(params["sweep.start"], params["sweep.stop"], int(params["sweep.points"]))
    rows = ordered_map(_figure_row, [(fid, params, float(x)) for x in xs], jobs)
    return _header(fig, params), rows
