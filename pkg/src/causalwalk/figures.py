"""Named parameter presets ``fig1`` .. ``fig9``, written as one CSV per panel.

Choices a preset has to make (which ICO construction, how BLP is normalized,
what "reverse" means for long periods) are written to the panel metadata.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .engine import MINUS, PLUS, PeriodicWalkSpec, SwitchSpec, activation_trajectory, evolve_definite, switched_step_evolve
from .errors import ConfigError
from .experiment import ResultTable, emit_csv, format_number, write_atomic
from .observables import blp_measure, coin_trajectory, concurrence, entanglement_entropy, state_spread, trace_distance_series
from .walker import make_localized_state

PI = math.pi
SYMMETRIC = (1 / math.sqrt(2), 1 / math.sqrt(2))


def _psi0(N, coin=SYMMETRIC):
    return make_localized_state(coin[0], coin[1], 0, 2 * N + 3)


def _angles(thetas) -> str:
    return ", ".join(format_number(t) for t in thetas)


def three_way(thetas, N, coin=SYMMETRIC, reversal="block", theta_s=PI / 4):
    """Forward, reverse and |+>-post-selected activation trajectories."""
    fwd = PeriodicWalkSpec(tuple(thetas), N, "forward")
    rev = PeriodicWalkSpec(tuple(thetas), N, "mirror" if reversal == "mirror" else "reverse")
    psi = _psi0(N, coin)
    return {
        "forward": evolve_definite(psi, fwd),
        "reverse": evolve_definite(psi, rev),
        "ico": activation_trajectory(psi, fwd, rev, SwitchSpec(theta_s)),
    }


def spreads(trajs) -> dict[str, list[float]]:
    return {mode: [state_spread(s) for s in traj.states] for mode, traj in trajs.items()}


def td_series(thetas, N, reversal="block") -> dict[str, list[float]]:
    plus = three_way(thetas, N, PLUS, reversal)
    minus = three_way(thetas, N, MINUS, reversal)
    return {mode: trace_distance_series(plus[mode], minus[mode]) for mode in plus}


def blp_values(thetas, N, reversal="block") -> dict[str, float]:
    return {mode: blp_measure(d).value for mode, d in td_series(thetas, N, reversal).items()}


def entanglement_series(thetas, N, reversal="block"):
    trajs = three_way(thetas, N, reversal=reversal)
    rhos = {mode: coin_trajectory(t) for mode, t in trajs.items()}
    entropy = {m: [entanglement_entropy(r) for r in rs] for m, rs in rhos.items()}
    conc = {m: [concurrence(r) for r in rs] for m, rs in rhos.items()}
    return entropy, conc


def switched_step_spreads(theta1, theta2, N, theta_s=PI / 4):
    psi = _psi0(N)
    fwd = evolve_definite(psi, PeriodicWalkSpec((theta1, theta2), N, "forward"))
    step = switched_step_evolve(psi, theta1, theta2, theta_s, N)
    sig_f = [state_spread(s) for s in fwd.states]
    return list(step.times), [sig_f[t] for t in step.times], [state_spread(s) for s in step.states]


# -- panels -----------------------------------------------------------------


def _table(name, columns, **meta) -> ResultTable:
    meta = {"engine_version": __version__, **meta}
    return ResultTable(name, columns, {k: str(v) for k, v in meta.items()})


def _fig_switched_step(tag, theta1, theta2):
    N = 100
    t, sig_f, sig_s = switched_step_spreads(theta1, theta2, N)
    meta = dict(
        figure=tag,
        construction="switch applied to each pair of steps, theta_s = pi/4, sampled every two steps",
        thetas=_angles((theta1, theta2)),
        steps=N,
    )
    return [
        _table(f"{tag}_spread", {"t": t, "sigma_forward": sig_f, "sigma_ico_step": sig_s}, **meta),
        _table(f"{tag}_difference", {"t": t, "delta_sigma": list(np.subtract(sig_s, sig_f))}, **meta),
    ]


def fig1():
    return _fig_switched_step("fig1", PI / 6, PI / 4)


def fig2():
    return _fig_switched_step("fig2", PI / 4, PI / 6)


def fig3():
    N, thetas = 100, (PI / 4, PI / 6)
    trajs = three_way(thetas, N)
    final = {m: np.sum(np.abs(tr.final.amplitudes) ** 2, axis=0) for m, tr in trajs.items()}
    x = [int(v) for v in trajs["forward"].final.positions]
    cols = {"x": x, **{f"p_{m}": list(p) for m, p in final.items()}}
    return [_table("fig3_distribution", cols, figure="fig3", thetas=_angles(thetas), steps=N, t=N)]


def fig4():
    N, thetas = 100, (PI / 4, PI / 6)
    sig = spreads(three_way(thetas, N))
    t = list(range(N + 1))
    meta = dict(figure="fig4", thetas=_angles(thetas), steps=N)
    return [
        _table("fig4_spread", {"t": t, **{f"sigma_{m}": v for m, v in sig.items()}}, **meta),
        _table(
            "fig4_difference",
            {
                "t": t,
                "delta_forward": list(np.subtract(sig["ico"], sig["forward"])),
                "delta_reverse": list(np.subtract(sig["ico"], sig["reverse"])),
            },
            **meta,
        ),
    ]


FIG5_THETAS = (PI / 6, PI / 4, 5 * PI / 12)


def three_period_spreads(thetas, N, ordering):
    """Spread of the ascending or descending 3-period walk and of its activation with the time-reversed walk."""
    block = tuple(sorted(thetas)) if ordering == "ascending" else tuple(sorted(thetas, reverse=True))
    sig = spreads(three_way(block, N))
    return sig["forward"], sig["ico"]


def fig5():
    N = 100
    tables = []
    for ordering in ("ascending", "descending"):
        definite, ico = three_period_spreads(FIG5_THETAS, N, ordering)
        t = list(range(N + 1))
        meta = dict(figure="fig5", thetas=_angles(FIG5_THETAS), ordering=ordering, steps=N)
        tables.append(_table(f"fig5_{ordering}_spread", {"t": t, "sigma_definite": definite, "sigma_ico": ico}, **meta))
        tables.append(
            _table(f"fig5_{ordering}_difference", {"t": t, "delta_sigma": list(np.subtract(ico, definite))}, **meta)
        )
    return tables


FIG6_THETAS = (PI / 4, PI / 6)


def fig6():
    N = 50
    d = td_series(FIG6_THETAS, N)
    blp = {m: blp_measure(v).value for m, v in d.items()}
    meta = dict(
        figure="fig6",
        thetas=_angles(FIG6_THETAS),
        theta_choice="same pair as the fig3 and fig4 presets",
        steps=N,
        coin_pair="|+>, |->",
    )
    return [
        _table("fig6_trace_distance", {"t": list(range(N + 1)), **{f"d_{m}": v for m, v in d.items()}}, **meta),
        _table("fig6_blp", {"mode": list(blp), "blp": list(blp.values())}, **meta),
    ]


FIG8_PANELS = {"a": PI / 6, "b": 5 * PI / 12}


def fig8_values(theta1, N=50, periods=range(2, 26), reversal="block"):
    rows = {"k": [], "blp_forward": [], "blp_reverse": [], "blp_ico": []}
    for k in periods:
        values = blp_values((theta1,) + (PI / 4,) * (k - 1), N, reversal)
        rows["k"].append(k)
        for m, v in values.items():
            rows[f"blp_{m}"].append(v)
    return rows


def fig8():
    tables = []
    for panel, theta1 in FIG8_PANELS.items():
        rows = fig8_values(theta1)
        peak = max(max(rows[f"blp_{m}"]) for m in ("forward", "reverse", "ico"))
        for m in ("forward", "reverse", "ico"):
            rows[f"nblp_{m}"] = [v / peak for v in rows[f"blp_{m}"]]
        meta = dict(
            figure="fig8",
            panel=panel,
            theta1=format_number(theta1),
            other_thetas=format_number(PI / 4),
            steps=50,
            reverse="reversed block with the tail continuing it",
            normalization="nblp = blp / max over modes and periods in this panel",
        )
        tables.append(_table(f"fig8{panel}_blp_vs_period", rows, **meta))
    return tables


FIG7_THETAS = (PI / 4, PI / 3)
FIG9_THETAS = (PI / 3, PI / 4, 5 * PI / 12)


def fig7():
    N = 100
    entropy, conc = entanglement_series(FIG7_THETAS, N)
    t = list(range(N + 1))
    meta = dict(figure="fig7", thetas=_angles(FIG7_THETAS), steps=N)
    return [
        _table("fig7_concurrence", {"t": t, **{f"c_{m}": v for m, v in conc.items()}}, **meta),
        _table("fig7_entropy", {"t": t, **{f"s_{m}": v for m, v in entropy.items()}}, **meta),
    ]


def fig9():
    N = 100
    tables = []
    for ordering in ("ascending", "descending"):
        block = tuple(sorted(FIG9_THETAS, reverse=(ordering == "descending")))
        entropy, conc = entanglement_series(block, N)
        t = list(range(N + 1))
        meta = dict(figure="fig9", thetas=_angles(block), ordering=ordering, steps=N)
        tables.append(_table(f"fig9_{ordering}_entropy", {"t": t, **{f"s_{m}": v for m, v in entropy.items()}}, **meta))
        tables.append(
            _table(f"fig9_{ordering}_concurrence", {"t": t, **{f"c_{m}": v for m, v in conc.items()}}, **meta)
        )
    return tables


FIGURES: dict[str, Callable[[], list[ResultTable]]] = {
    "fig1": fig1,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
}


def figure_suite(name: str, outdir) -> list[Path]:
    if name not in FIGURES:
        raise ConfigError(f"unknown figure {name!r}; expected one of {', '.join(FIGURES)}")
    outdir = Path(outdir)
    return [write_atomic(outdir / f"{table.name}.csv", emit_csv(table)) for table in FIGURES[name]()]
