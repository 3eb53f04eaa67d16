"""Experiment configurations, runs, CSV tables and the figure presets.

A configuration is plain text, one ``key = value`` per line; ``#`` starts a
comment. Numbers may be written as small arithmetic expressions over ``pi``,
``sqrt(...)`` and the imaginary unit ``i``, e.g. ``5pi/12`` or ``0.8i``.

Every emitted CSV starts with ``# key = value`` lines that re-parse into the
exact configuration, followed by ``# [meta] ...`` lines for engine version
and conventions, then the header row.
"""

from __future__ import annotations

import ast
import csv
import io
import math
import operator
import os
import re
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .engine import (
    MAX_FULL_PERIOD,
    MINUS,
    PLUS,
    PeriodicWalkSpec,
    SwitchSpec,
    Trajectory,
    activation_trajectory,
    evolve_definite,
    full_activation_trajectory,
    periodic_sequence,
    switched_step_evolve,
)
from .errors import ConfigError, WalkError
from .observables import (
    blp_measure,
    coin_trajectory,
    concurrence,
    entanglement_entropy,
    state_spread,
    trace_distance_series,
)
from .walker import make_localized_state

MODES = ("forward", "reverse", "ico", "ico-step", "full-ico")
OBSERVABLES = ("dist", "spread", "td", "blp", "entropy", "concurrence")
REVERSALS = ("block", "mirror")

# -- number literals --------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "i": 1j}
_FUNCS = {"sqrt": lambda v: np.sqrt(v) if isinstance(v, complex) else math.sqrt(v)}
_IMPLICIT = re.compile(r"(?<=[\d)])\s*(?=pi\b|i\b|sqrt\b|\()")


def parse_number(text: str) -> complex:
    """Evaluate a numeric literal such as ``pi/6``, ``-5pi/12``, ``1/sqrt(2)`` or ``0.6+0.8i``."""
    src = _IMPLICIT.sub("*", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed number {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"malformed number {text!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise ValueError(f"division by zero in {text!r}") from exc


def parse_real(text: str) -> float:
    v = complex(parse_number(text))
    if v.imag != 0.0:
        raise ValueError(f"expected a real number, got {text!r}")
    return v.real


def format_number(v) -> str:
    """Shortest round-trip decimal; complex values as ``re+im*i``."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    z = complex(v)
    if z.imag == 0.0:
        return repr(float(z.real))
    return f"{float(z.real)!r}+{float(z.imag)!r}*i"


# -- configuration ----------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    thetas: tuple[float, ...]
    steps: int
    k: int = 0
    theta_s: float = math.pi / 4
    alpha: complex = 1 / math.sqrt(2)
    beta: complex = 1 / math.sqrt(2)
    observables: tuple[str, ...] = ("spread",)
    lattice: int = 0
    allow_wrap: bool = False
    block: tuple[int, ...] = ()
    reversal: str = "block"
    postselect: tuple[complex, complex] = PLUS
    output: Optional[str] = None

    def __post_init__(self):
        if not self.k:
            object.__setattr__(self, "k", len(self.thetas))
        if not self.lattice:
            object.__setattr__(self, "lattice", 2 * self.steps + 3)

    def config_lines(self) -> list[str]:
        """``key = value`` lines that re-parse into this configuration."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "output" and v is None:
                continue
            if f.name == "block" and not v:
                continue
            if isinstance(v, tuple):
                text = ", ".join(v) if f.name == "observables" else ", ".join(format_number(x) for x in v)
            elif isinstance(v, str):
                text = v
            else:
                text = format_number(v)
            lines.append(f"{f.name} = {text}")
        return lines

    def walk_specs(self) -> tuple[PeriodicWalkSpec, PeriodicWalkSpec]:
        """(forward, reverse) branches."""
        order = self.block if self.block else "forward"
        fwd = PeriodicWalkSpec(self.thetas, self.steps, order)
        if self.reversal == "mirror":
            rev = PeriodicWalkSpec(self.thetas, self.steps, "mirror")
            if self.block:
                raise ConfigError("reversal = mirror cannot be combined with an explicit block")
        else:
            rev = fwd.reversed()
        return fwd, rev


def _list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _parse_int(value: str) -> int:
    v = parse_real(value)
    if v != int(v):
        raise ValueError(f"expected an integer, got {value!r}")
    return int(v)


_PARSERS = {
    "mode": lambda v: v.strip(),
    "k": _parse_int,
    "thetas": lambda v: tuple(parse_real(x) for x in _list(v)),
    "theta_s": parse_real,
    "steps": _parse_int,
    "alpha": lambda v: complex(parse_number(v)),
    "beta": lambda v: complex(parse_number(v)),
    "observables": lambda v: tuple(_list(v)),
    "lattice": _parse_int,
    "allow_wrap": _parse_bool,
    "block": lambda v: tuple(_parse_int(x) for x in _list(v)),
    "reversal": lambda v: v.strip(),
    "postselect": lambda v: tuple(complex(parse_number(x)) for x in _list(v)),
    "output": lambda v: v.strip(),
}


def _simplify(v):
    if isinstance(v, complex) and v.imag == 0.0:
        return v.real
    return v


def parse_config(text: str) -> ExperimentConfig:
    values, where = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"malformed value for {key!r}: {exc}", lineno) from None
        where[key] = lineno
    return build_config(values, where)


def build_config(values: dict, where: Optional[dict] = None) -> ExperimentConfig:
    """Validate a key/value mapping into a config; ``where`` maps keys to line numbers."""
    where = where or {}
    line = where.get

    mode = values.get("mode", "forward")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}", line("mode"))
    steps = values.get("steps")
    if steps is not None and steps < 0:
        raise ConfigError(f"steps must be nonnegative, got {steps}", line("steps"))
    if mode == "ico-step" and steps is not None and steps % 2:
        raise ConfigError(f"ico-step requires even N, got steps = {steps}", line("steps"))

    if "thetas" not in values:
        raise ConfigError("missing required key 'thetas'", line("mode"))
    if steps is None:
        raise ConfigError("missing required key 'steps'", line("mode"))
    thetas = values["thetas"]
    if not thetas:
        raise ConfigError("thetas must not be empty", line("thetas"))
    k = values.get("k", len(thetas))
    if k < 1:
        raise ConfigError(f"period k must be positive, got {k}", line("k"))
    if len(thetas) != k:
        raise ConfigError(f"arity mismatch: k = {k} but {len(thetas)} theta value(s) given", line("thetas"))
    if mode == "ico-step" and k != 2:
        raise ConfigError(f"ico-step requires k = 2, got k = {k}", line("k") or line("thetas"))
    if mode == "full-ico":
        if k > MAX_FULL_PERIOD:
            raise ConfigError(f"full-ico requires k <= {MAX_FULL_PERIOD}, got k = {k}", line("k") or line("thetas"))
        if steps % k:
            raise ConfigError(f"full-ico requires k | N, got N = {steps}, k = {k}", line("steps"))

    obs = values.get("observables", ("spread",))
    bad = [o for o in obs if o not in OBSERVABLES]
    if bad or not obs:
        raise ConfigError(f"unknown observable(s) {bad}; expected a subset of {', '.join(OBSERVABLES)}", line("observables"))

    alpha = values.get("alpha", 1 / math.sqrt(2))
    beta = values.get("beta", 1 / math.sqrt(2))
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise ConfigError("initial coin (alpha, beta) is not normalized", line("alpha") or line("beta"))

    allow_wrap = values.get("allow_wrap", False)
    lattice = values.get("lattice", 2 * steps + 3)
    if lattice < 1:
        raise ConfigError(f"lattice must be positive, got {lattice}", line("lattice"))
    if lattice < 2 * steps + 3 and not allow_wrap:
        raise ConfigError(
            f"lattice {lattice} < 2N+3 = {2 * steps + 3}; set allow_wrap = true for cyclic runs",
            line("lattice"),
        )

    block = values.get("block", ())
    if block and sorted(block) != list(range(1, k + 1)):
        raise ConfigError(f"block {block} is not a permutation of 1..{k}", line("block"))
    reversal = values.get("reversal", "block")
    if reversal not in REVERSALS:
        raise ConfigError(f"reversal must be one of {REVERSALS}, got {reversal!r}", line("reversal"))
    if reversal == "mirror" and block:
        raise ConfigError("reversal = mirror cannot be combined with an explicit block", line("reversal"))

    postselect = values.get("postselect", PLUS)
    if len(postselect) != 2 or abs(sum(abs(v) ** 2 for v in postselect) - 1.0) > 1e-12:
        raise ConfigError("postselect must be a normalized pair", line("postselect"))

    return ExperimentConfig(
        mode=mode,
        thetas=tuple(float(t) for t in thetas),
        steps=steps,
        k=k,
        theta_s=float(values.get("theta_s", math.pi / 4)),
        alpha=_simplify(complex(alpha)),
        beta=_simplify(complex(beta)),
        observables=tuple(obs),
        lattice=lattice,
        allow_wrap=allow_wrap,
        block=tuple(block),
        reversal=reversal,
        postselect=tuple(_simplify(complex(v)) for v in postselect),
        output=values.get("output"),
    )


def config_from_csv(text: str) -> ExperimentConfig:
    """Rebuild the configuration echoed at the top of an emitted CSV."""
    lines = []
    for raw in text.splitlines():
        if not raw.startswith("#"):
            break
        body = raw[1:].strip()
        if body and not body.startswith("["):
            lines.append(body)
    return parse_config("\n".join(lines))


# -- result tables ----------------------------------------------------------


@dataclass
class ResultTable:
    name: str
    columns: dict[str, list]
    metadata: dict[str, str] = field(default_factory=dict)
    config: Optional[ExperimentConfig] = None

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"table {self.name!r} has ragged columns: {sorted(lengths)}")

    @property
    def header(self) -> list[str]:
        return list(self.columns)

    def __len__(self):
        return len(next(iter(self.columns.values()), []))

    def rows(self):
        return zip(*self.columns.values())


def _format_cell(v) -> str:
    if isinstance(v, str):
        return v
    return format_number(v)


def emit_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    if table.config is not None:
        for line in table.config.config_lines():
            buf.write(f"# {line}\r\n")
    for key, value in table.metadata.items():
        buf.write(f"# [meta] {key}: {value}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.header)
    for row in table.rows():
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_csv(text: str) -> tuple[list[str], list[list[str]]]:
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(body))
    return rows[0], rows[1:]


# -- running ----------------------------------------------------------------


def conventions(config: ExperimentConfig) -> dict[str, str]:
    fwd, rev = config.walk_specs()

    def block_text(spec):
        seq = periodic_sequence(PeriodicWalkSpec(spec.thetas, spec.period, spec.order))
        return "[" + ", ".join(format_number(c.theta) for c in seq) + "]"

    return {
        "engine_version": __version__,
        "shift": "coin 0 -> x-1, coin 1 -> x+1, cyclic lattice",
        "sequence_order": "application order, first applied first",
        "forward_block": block_text(fwd),
        "reverse": "exact time mirror of the forward sequence" if config.reversal == "mirror"
        else "reversed block " + block_text(rev),
        "postselect": ", ".join(format_number(v) for v in config.postselect),
        "entropy_base": "2",
        "concurrence": "sqrt(2(1 - Tr rho_c^2))",
        "blp": "sum of positive per-sample increments of D, coin pair |+>, |->",
    }


def trajectory_for(config: ExperimentConfig, alpha: complex, beta: complex) -> Trajectory:
    psi0 = make_localized_state(alpha, beta, 0, config.lattice)
    fwd, rev = config.walk_specs()
    wrap = config.allow_wrap
    if config.mode == "forward":
        return evolve_definite(psi0, fwd, wrap)
    if config.mode == "reverse":
        return evolve_definite(psi0, rev, wrap)
    if config.mode == "ico":
        return activation_trajectory(psi0, fwd, rev, SwitchSpec(config.theta_s, config.postselect), wrap)
    if config.mode == "ico-step":
        t1, t2 = config.thetas
        return switched_step_evolve(psi0, t1, t2, config.theta_s, config.steps, wrap)
    if config.mode == "full-ico":
        return full_activation_trajectory(psi0, config.thetas, config.steps, wrap)
    raise ConfigError(f"unknown mode {config.mode!r}")


def run_experiment(config: ExperimentConfig) -> list[ResultTable]:
    """Evaluate the requested observables.

    Returns the per-step series table (``t`` plus one column per scalar
    observable) and, when ``dist`` is requested, a long-form ``t, x,
    probability`` table. ``blp`` is emitted as the running BLP sum; its final
    value and revival intervals go to the metadata.
    """
    try:
        traj = trajectory_for(config, config.alpha, config.beta)
        meta = conventions(config)
        obs = config.observables
        series: dict[str, list] = {"t": list(traj.times)}
        if "spread" in obs:
            series["sigma"] = [state_spread(s) for s in traj.states]
        if "td" in obs or "blp" in obs:
            d = trace_distance_series(trajectory_for(config, *PLUS), trajectory_for(config, *MINUS))
            if "td" in obs:
                series["d"] = d
            if "blp" in obs:
                inc = np.maximum(np.diff(d), 0.0)
                series["blp"] = [0.0] + list(np.cumsum(inc))
                result = blp_measure(d)
                meta["blp_value"] = format_number(result.value)
                meta["blp_revival_intervals"] = " ".join(f"{a}-{b}" for a, b in result.revival_intervals)
        if "entropy" in obs or "concurrence" in obs:
            rhos = coin_trajectory(traj)
            if "entropy" in obs:
                series["entropy"] = [entanglement_entropy(r) for r in rhos]
            if "concurrence" in obs:
                series["concurrence"] = [concurrence(r) for r in rhos]
    except WalkError as exc:
        raise type(exc)(f"{exc} (mode={config.mode}, thetas={config.thetas}, steps={config.steps})") from exc

    tables = []
    if len(series) > 1:
        tables.append(ResultTable("series", series, dict(meta), config))
    if "dist" in obs:
        cols: dict[str, list] = {"t": [], "x": [], "probability": []}
        for t, state in zip(traj.times, traj.states):
            p = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
            cols["t"] += [t] * len(p)
            cols["x"] += [int(x) for x in state.positions]
            cols["probability"] += [float(v) for v in p]
        tables.append(ResultTable("dist", cols, dict(meta), config))
    return tables


def with_mode(config: ExperimentConfig, mode: str, **changes) -> ExperimentConfig:
    return replace(config, mode=mode, **changes)
