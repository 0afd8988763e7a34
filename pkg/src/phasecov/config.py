"""Flat ``key = value`` scenario files.

One scenario per file; ``#`` starts a comment. Keys use dotted sections::

    channel.kind = nmad+rtn
    channel.nmad.kappa = 1
    channel.nmad.l = 0.1
    channel.rtn.alpha = 1
    channel.rtn.eta = 1
    state.theta = 1.5707963267948966
    grid.start = 0
    grid.stop = 10
    grid.points = 201

A single-kind channel may drop the kind from parameter keys
(``channel.kappa``).
"""

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import KINDS, Composite, combine
from .errors import ConfigError
from .qubit import BlochVector, state_from_bloch, state_from_r, state_from_theta

IDENTITY = "identity"
STATE_KEYS = ("theta", "r", "bloch")
ACTION_KEYS = ("theta", "gamma", "GammaL", "tau", "q_f", "intervals", "steps", "rate",
               "path_out", "snapshot_every")
TRUE = {"true", "yes", "on", "1"}
FALSE = {"false", "no", "off", "0"}


def parse_lines(text):
    """``{key: (value, line)}`` from config text."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=lineno)
        if not value:
            raise ConfigError("empty value", line=lineno, key=key)
        if key in out:
            raise ConfigError(f"duplicate key (first set on line {out[key][1]})",
                              line=lineno, key=key)
        out[key] = (value, lineno)
    return out


def parse_override(item):
    if "=" not in item:
        raise ConfigError(f"override '{item}' is not of the form key=value")
    key, value = (part.strip() for part in item.split("=", 1))
    if not key or not value:
        raise ConfigError(f"override '{item}' is not of the form key=value")
    return key, value


def apply_overrides(entries, overrides):
    entries = dict(entries)
    for item in overrides or ():
        key, value = parse_override(item)
        entries[key] = (value, None)
    return entries


def to_float(entries, key, default=None):
    if key not in entries:
        if default is None:
            raise ConfigError("missing required key", key=key)
        return default
    value, line = entries[key]
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"'{value}' is not a number", line=line, key=key) from None
    if math.isnan(x):
        raise ConfigError("NaN is not allowed", line=line, key=key)
    return x


def to_int(entries, key, default=None):
    x = to_float(entries, key, None if default is None else float(default))
    if x != int(x):
        raise ConfigError(f"'{entries[key][0]}' is not an integer", line=entries[key][1], key=key)
    return int(x)


def to_bool(entries, key, default=False):
    if key not in entries:
        return default
    value, line = entries[key]
    if value.lower() in TRUE:
        return True
    if value.lower() in FALSE:
        return False
    raise ConfigError(f"'{value}' is not a boolean", line=line, key=key)


def to_floats(entries, key):
    value, line = entries[key]
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise ConfigError(f"'{value}' is not a comma-separated list of numbers",
                          line=line, key=key) from None


def fmt(x):
    """Shortest round-tripping text for a number."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

def _kind_fields(cls):
    return [f.name for f in dataclasses.fields(cls) if f.name != "omega"]


def channel_from_entries(entries):
    if "channel.kind" not in entries:
        raise ConfigError("missing required key", key="channel.kind")
    value, line = entries["channel.kind"]
    kinds = [k.strip().lower() for k in value.split("+")]
    if kinds == [IDENTITY]:
        kinds = []
    for k in kinds:
        if k not in KINDS:
            raise ConfigError(f"unknown channel kind '{k}' (known: {', '.join(sorted(KINDS))}, "
                              f"{IDENTITY})", line=line, key="channel.kind")
    if len(set(kinds)) != len(kinds):
        raise ConfigError("channel kind listed twice", line=line, key="channel.kind")

    known = {"channel.kind", "channel.omega"}
    members = []
    for k in kinds:
        cls = KINDS[k]
        kwargs = {}
        for name in _kind_fields(cls):
            candidates = [f"channel.{k}.{name}"]
            if len(kinds) == 1:
                candidates.append(f"channel.{name}")
            found = [c for c in candidates if c in entries]
            known.update(candidates)
            if len(found) > 1:
                raise ConfigError("parameter given twice", line=entries[found[1]][1], key=found[1])
            if found:
                kwargs[name] = to_float(entries, found[0])
            elif cls.__dataclass_fields__[name].default is dataclasses.MISSING:
                raise ConfigError(f"missing parameter '{name}' for channel '{k}'",
                                  key=f"channel.{k}.{name}")
        try:
            members.append(cls(**kwargs))
        except ValueError as exc:
            raise ConfigError(f"invalid '{k}' parameters: {exc}", key=f"channel.{k}") from None

    for key, (_, kline) in entries.items():
        if key.startswith("channel.") and key not in known:
            raise ConfigError("unknown channel key", line=kline, key=key)
    omega = to_float(entries, "channel.omega", 0.0)
    if not members:
        return Composite((), omega=omega)
    if len(members) == 1:
        return dataclasses.replace(members[0], omega=omega) if omega else members[0]
    try:
        return combine(*members, omega=omega)
    except ValueError as exc:
        raise ConfigError(str(exc), line=line, key="channel.kind") from None


def channel_to_lines(c):
    members = c.members if isinstance(c, Composite) else (c,)
    omega = c.omega
    kind = "+".join(m.kind for m in members) or IDENTITY
    lines = [f"channel.kind = {kind}"]
    if isinstance(c, Composite):
        for m in members:
            if m.omega:
                raise ConfigError("composite members cannot carry their own omega")
    for m in members:
        for name in _kind_fields(type(m)):
            lines.append(f"channel.{m.kind}.{name} = {fmt(getattr(m, name))}")
    if omega:
        lines.append(f"channel.omega = {fmt(omega)}")
    return lines


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def state_from_spec(spec):
    kind, value = spec
    if kind == "theta":
        return state_from_theta(value)
    if kind == "r":
        return state_from_r(value)
    return state_from_bloch(BlochVector(*value))


def state_spec_from_entries(entries, prefix="state", default=None):
    given = [k for k in STATE_KEYS if f"{prefix}.{k}" in entries]
    for key, (_, line) in entries.items():
        if key.startswith(prefix + ".") and key[len(prefix) + 1:] not in STATE_KEYS:
            raise ConfigError("unknown state key", line=line, key=key)
    if not given:
        if default is not None:
            return default
        raise ConfigError(f"one of {', '.join(prefix + '.' + k for k in STATE_KEYS)} is required")
    if len(given) > 1:
        key = f"{prefix}.{given[1]}"
        raise ConfigError("initial state given more than once", line=entries[key][1], key=key)
    key = f"{prefix}.{given[0]}"
    if given[0] == "bloch":
        value = to_floats(entries, key)
        if len(value) != 3:
            raise ConfigError("Bloch vector needs three components", line=entries[key][1], key=key)
    else:
        value = to_float(entries, key)
    spec = (given[0], value)
    try:
        state_from_spec(spec)
    except ValueError as exc:
        raise ConfigError(f"invalid initial state: {exc}", line=entries[key][1], key=key) from None
    return spec


def state_spec_to_line(spec, prefix="state"):
    kind, value = spec
    text = ", ".join(fmt(v) for v in value) if kind == "bloch" else fmt(value)
    return f"{prefix}.{kind} = {text}"


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("grid needs at least 2 points", key="grid.points")
        if not self.stop > self.start:
            raise ConfigError("grid must be strictly increasing (stop > start)", key="grid.stop")
        if self.start < 0:
            raise ConfigError("grid must start at t >= 0", key="grid.start")

    def values(self):
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    channel: object
    state: tuple = ("theta", math.pi / 2)
    grid: Grid = Grid(0.0, 1.0, 2)
    zeta: bool = False
    restarts: int = 5
    seed: int = 0
    jobs: int = 1
    out: str = ""
    action: dict = field(default_factory=dict)

    @property
    def initial_state(self):
        return state_from_spec(self.state)


SCENARIO_KEYS = {"grid.start", "grid.stop", "grid.points", "output.zeta", "output.path",
                 "zeta.restarts", "run.seed", "run.jobs"}


def scenario_from_entries(entries, require_channel=True):
    for key, (_, line) in entries.items():
        section = key.split(".", 1)[0]
        if section in ("channel", "state"):
            continue
        if section == "action":
            if key[len("action."):] not in ACTION_KEYS:
                raise ConfigError("unknown action key", line=line, key=key)
            continue
        if key not in SCENARIO_KEYS:
            raise ConfigError("unknown key", line=line, key=key)

    if require_channel or "channel.kind" in entries:
        channel = channel_from_entries(entries)
    else:
        channel = Composite(())
    state = state_spec_from_entries(entries, default=("theta", math.pi / 2))
    grid = Grid(to_float(entries, "grid.start", 0.0), to_float(entries, "grid.stop", 1.0),
                to_int(entries, "grid.points", 2))
    action = {}
    for name in ACTION_KEYS:
        key = f"action.{name}"
        if key not in entries:
            continue
        if name == "path_out":
            action[name] = entries[key][0]
        elif name in ("intervals", "steps", "snapshot_every"):
            action[name] = to_int(entries, key)
        else:
            action[name] = to_float(entries, key)
    restarts = to_int(entries, "zeta.restarts", 5)
    seed = to_int(entries, "run.seed", 0)
    jobs = to_int(entries, "run.jobs", 1)
    if restarts < 1:
        raise ConfigError("need at least one restart", key="zeta.restarts")
    if jobs < 1:
        raise ConfigError("need at least one job", key="run.jobs")
    if seed < 0:
        raise ConfigError("seed must be non-negative", key="run.seed")
    out = entries["output.path"][0] if "output.path" in entries else ""
    return Scenario(channel, state, grid, to_bool(entries, "output.zeta"), restarts, seed, jobs,
                    out, action)


def parse_scenario(text, overrides=(), require_channel=True):
    return scenario_from_entries(apply_overrides(parse_lines(text), overrides), require_channel)


def load_scenario(path, overrides=(), require_channel=True):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc.strerror}") from None
    return parse_scenario(text, overrides, require_channel)


def to_config(s):
    """Config text that parses back to an equal scenario."""
    lines = channel_to_lines(s.channel)
    lines.append(state_spec_to_line(s.state))
    lines += [f"grid.start = {fmt(s.grid.start)}", f"grid.stop = {fmt(s.grid.stop)}",
              f"grid.points = {s.grid.points}", f"output.zeta = {fmt(s.zeta)}",
              f"zeta.restarts = {s.restarts}", f"run.seed = {s.seed}", f"run.jobs = {s.jobs}"]
    if s.out:
        lines.append(f"output.path = {s.out}")
    for name in ACTION_KEYS:
        if name in s.action:
            v = s.action[name]
            lines.append(f"action.{name} = {v if isinstance(v, str) else fmt(v)}")
    return "\n".join(lines) + "\n"
