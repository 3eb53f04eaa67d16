"""Exit criteria, each evaluated at its pinned tolerance.

``run_all()`` returns one :class:`Criterion` per check; ``scripts/run_acceptance.py``
and ``tests/test_acceptance.py`` both print a PASS/FAIL line per criterion.
Random parameter draws use fixed seeds so every run is identical.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import oracle
from .channels import KrausChannel, switch_channel_apply
from .commutator import commutator_single_param
from .engine import (
    PLUS,
    PeriodicWalkSpec,
    SwitchSpec,
    activation_trajectory,
    binomial_commuting_expand,
    effective_activation_apply,
    evolve_definite,
    evolve_sequence,
    expand_switched_step,
    project_switch,
    switch_extended_evolve,
    switched_step_operator,
)
from .figures import (
    FIG5_THETAS,
    FIG6_THETAS,
    FIG7_THETAS,
    FIG8_PANELS,
    blp_values,
    entanglement_series,
    fig8_values,
    spreads,
    switched_step_spreads,
    three_period_spreads,
    three_way,
)
from .walker import CoinSpec, WalkerState, make_localized_state

PI = math.pi


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] C{self.number:<2d} {self.title}: {self.detail} ({self.seconds:.2f} s)"


def _timed(fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return passed, detail, time.perf_counter() - t0


def lemma_iff(L: int = 11, theta1: float = PI / 7, tol: float = 1e-12):
    worst_zero, min_nonzero, worst_pred = 0.0, np.inf, 0.0
    ok = True
    for m in range(25):
        dtheta = m * PI / 12
        computed, predicted = commutator_single_param(theta1, theta1 + dtheta, L)
        size = float(np.max(np.abs(computed)))
        worst_pred = max(worst_pred, float(np.max(np.abs(computed - predicted))))
        if m % 12 == 0:
            worst_zero = max(worst_zero, size)
            ok &= size < tol
        else:
            min_nonzero = min(min_nonzero, size)
            ok &= size > 0.01
    ok &= worst_pred < tol
    return ok, f"max|[.,.]| at 0,pi,2pi = {worst_zero:.1e}, min elsewhere = {min_nonzero:.3f}, closed form diff = {worst_pred:.1e}"


def expansion_identities(draws: int = 10, seed: int = 2, tol: float = 1e-10):
    rng = np.random.default_rng(seed)
    worst_enum = worst_binom = 0.0
    for N in (2, 4, 6, 8):
        L = 2 * N + 3
        for _ in range(draws):
            t1, t2, ts = rng.uniform(0, 2 * PI, 3)
            while abs(math.sin(t2 - t1)) < 1e-3:
                t2 = rng.uniform(0, 2 * PI)
            direct = switched_step_operator(t1, t2, ts, N, L)
            expanded = expand_switched_step(t1, t2, ts, N, L)
            enumerated = oracle.sum_terms(oracle.enumerate_step_sequences(t1, t2, ts, N), L)
            worst_enum = max(
                worst_enum,
                float(np.max(np.abs(direct - expanded))),
                float(np.max(np.abs(direct - enumerated))),
            )
            n = int(rng.integers(-2, 3))
            direct_c = switched_step_operator(t1, t1 + n * PI, ts, N, L)
            worst_binom = max(worst_binom, float(np.max(np.abs(direct_c - binomial_commuting_expand(t1, ts, n, N, L)))))
    ok = worst_enum < tol and worst_binom < tol
    return ok, f"subset expansion diff = {worst_enum:.1e}, binomial diff = {worst_binom:.1e}"


def switch_consistency(draws: int = 20, seed: int = 3, tol: float = 1e-12):
    rng = np.random.default_rng(seed)
    worst_fid = 0.0
    for _ in range(draws):
        t1, t2, ts = rng.uniform(0, 2 * PI, 3)
        N = int(rng.integers(1, 21))
        psi = make_localized_state(*PLUS, 0, 2 * N + 3)
        fwd = PeriodicWalkSpec((t1, t2), N, "forward")
        rev = PeriodicWalkSpec((t1, t2), N, "reverse")
        projected, _ = project_switch(switch_extended_evolve(psi, fwd, rev, SwitchSpec(ts)), PLUS)
        effective, norm = effective_activation_apply(psi, fwd, rev, ts)
        overlap = np.vdot(projected.to_vector(), effective.to_vector() / norm)
        worst_fid = max(worst_fid, 1.0 - abs(overlap) ** 2)
    worst_red = 0.0
    N = 20
    psi = make_localized_state(*PLUS, 0, 2 * N + 3)
    fwd = PeriodicWalkSpec((PI / 4, PI / 6), N, "forward")
    rev = PeriodicWalkSpec((PI / 4, PI / 6), N, "reverse")
    for ts, ref in ((0.0, fwd), (PI / 2, rev)):
        act = activation_trajectory(psi, fwd, rev, SwitchSpec(ts, (1.0, 0.0) if ts == 0.0 else (0.0, 1.0)))
        plus = activation_trajectory(psi, fwd, rev, SwitchSpec(ts))
        definite = evolve_definite(psi, ref)
        for a, b, c in zip(act.states, plus.states, definite.states):
            worst_red = max(
                worst_red,
                float(np.max(np.abs(a.amplitudes - c.amplitudes))),
                float(np.max(np.abs(b.amplitudes - c.amplitudes))),
            )
    ok = worst_fid < tol and worst_red < tol
    return ok, f"1 - fidelity <= {worst_fid:.1e}, theta_s in {{0, pi/2}} diff = {worst_red:.1e}"


def fig4_spread():
    sig = spreads(three_way((PI / 4, PI / 6), 100))
    f, r, i = sig["forward"][-1], sig["reverse"][-1], sig["ico"][-1]
    ok = i - f > 0.5 and i - r > 0.5
    return ok, (
        f"sigma(100): forward {f:.4f}, reverse {r:.4f}, ico {i:.4f}; "
        f"margins {i - f:.4f}, {i - r:.4f} (need > 0.5)"
    )


def fig12_switched_step():
    parts, ok = [], True
    for t1, t2 in ((PI / 6, PI / 4), (PI / 4, PI / 6)):
        t, sig_f, sig_s = switched_step_spreads(t1, t2, 100)
        early = [tt for tt, a, b in zip(t, sig_f, sig_s) if tt < 30 and b > a]
        late = sig_s[-1] < sig_f[-1]
        ok &= bool(early) and late
        parts.append(
            f"({t1 / PI:.3g}pi, {t2 / PI:.3g}pi): first advantage t={early[0] if early else None}, "
            f"sigma(100) step {sig_s[-1]:.2f} vs forward {sig_f[-1]:.2f}"
        )
    return ok, "; ".join(parts)


def fig6_blp():
    b = blp_values(FIG6_THETAS, 50)
    ok = b["ico"] > max(b["forward"], b["reverse"]) and abs(b["forward"] - b["reverse"]) > 1e-6
    return ok, (
        f"BLP forward {b['forward']:.4f}, reverse {b['reverse']:.4f}, ico {b['ico']:.4f} "
        f"(thetas = pi/4, pi/6, N = 50)"
    )


def fig5_three_period():
    adv = {}
    for ordering in ("ascending", "descending"):
        definite, ico = three_period_spreads(FIG5_THETAS, 99, ordering)
        adv[ordering] = ico[-1] - definite[-1]
    ok = adv["ascending"] > 0 and adv["descending"] > 0 and adv["ascending"] >= adv["descending"]
    return ok, f"advantage at N=99: ascending {adv['ascending']:.4f}, descending {adv['descending']:.4f}"


def fig7_sandwich(tol: float = 0.02):
    entropy, conc = entanglement_series(FIG7_THETAS, 100)
    worst = {}
    for name, series in (("entropy", entropy), ("concurrence", conc)):
        w = 0.0
        for t in range(10, 101):
            lo = min(series["forward"][t], series["reverse"][t])
            hi = max(series["forward"][t], series["reverse"][t])
            w = max(w, lo - series["ico"][t], series["ico"][t] - hi)
        worst[name] = w
    ok = all(w <= tol for w in worst.values())
    return ok, (
        f"largest excursion outside [min, max]: entropy {max(worst['entropy'], 0):.4f}, "
        f"concurrence {max(worst['concurrence'], 0):.4f} (allowed {tol})"
    )


def fig8_periods():
    parts, ok = [], True
    for panel, theta1 in FIG8_PANELS.items():
        rows = fig8_values(theta1)
        wins = [
            k
            for k, f, r, i in zip(rows["k"], rows["blp_forward"], rows["blp_reverse"], rows["blp_ico"])
            if i > max(f, r)
        ]
        b20 = rows["blp_ico"][rows["k"].index(20)]
        b25 = rows["blp_ico"][rows["k"].index(25)]
        sat = abs(b25 - b20) / b25
        ok &= len(wins) == len(rows["k"]) and sat < 0.1
        parts.append(f"panel {panel}: ico above both at {len(wins)}/{len(rows['k'])} periods, saturation {sat:.3f}")
    return ok, "; ".join(parts)


def oracle_equivalence(configs: int = 50, seed: int = 5):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(configs):
        L = int(rng.choice(np.arange(5, 22, 2)))
        N = int(rng.integers(0, 9))
        steps = [CoinSpec(*rng.uniform(-PI, PI, 3)) for _ in range(N)]
        vec = rng.normal(size=2 * L) + 1j * rng.normal(size=2 * L)
        psi = WalkerState.from_vector(vec / np.linalg.norm(vec), L)
        engine = evolve_sequence(psi, steps, allow_wrap=True).final.to_vector()
        dense = oracle.brute_force_operator(steps, L) @ psi.to_vector()
        worst = max(worst, float(np.max(np.abs(engine - dense))))
    return worst < 1e-12, f"max entry diff over {configs} configurations = {worst:.1e}"


def switch_channel_checks():
    rng = np.random.default_rng(11)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    p, q = 0.3, 0.6
    bitflip = KrausChannel((math.sqrt(1 - p) * np.eye(2), math.sqrt(p) * x))
    phaseflip = KrausChannel((math.sqrt(1 - q) * np.eye(2), math.sqrt(q) * z))
    u1 = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    u2 = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
    plus = np.full((2, 2), 0.5, dtype=complex)
    worst_tr = worst_psd = 0.0
    pairs = [
        (KrausChannel.identity(2), KrausChannel.identity(2)),
        (KrausChannel.unitary(u1), KrausChannel.unitary(u2)),
        (bitflip, phaseflip),
    ]
    for phi1, phi2 in pairs:
        out = switch_channel_apply(phi1, phi2, rho, plus)
        worst_tr = max(worst_tr, abs(np.trace(out) - 1.0))
        worst_psd = max(worst_psd, -float(np.min(np.linalg.eigvalsh(out))))
    controlled = np.kron(u2 @ u1, np.diag([1, 0])) + np.kron(u1 @ u2, np.diag([0, 1]))
    expected = controlled @ np.kron(rho, plus) @ controlled.conj().T
    diff = float(np.max(np.abs(switch_channel_apply(KrausChannel.unitary(u1), KrausChannel.unitary(u2), rho, plus) - expected)))
    ok = worst_tr < 1e-10 and worst_psd < 1e-10 and diff < 1e-12
    return ok, f"|tr - 1| = {worst_tr:.1e}, min eigenvalue >= {-worst_psd:.1e}, controlled-unitary diff = {diff:.1e}"


CRITERIA = [
    (1, "commutation iff dtheta = n pi, closed-form commutator", lemma_iff, 1.0),
    (2, "Switched-step expansion identities", expansion_identities, 10.0),
    (3, "Switch post-selection consistency", switch_consistency, None),
    (4, "fig4 preset: ICO spread advantage", fig4_spread, 5.0),
    (5, "fig1/fig2 presets: switched-step advantage then localization", fig12_switched_step, None),
    (6, "fig6 preset: BLP ordering and causal asymmetry", fig6_blp, None),
    (7, "fig5 preset: three-period ordering", fig5_three_period, None),
    (8, "fig7 preset: entanglement sandwich", fig7_sandwich, None),
    (9, "fig8 preset: BLP versus period", fig8_periods, 60.0),
    (10, "Engine vs dense-operator oracle", oracle_equivalence, None),
    (11, "Switch channel validity", switch_channel_checks, None),
]


def evaluate(number: int) -> Criterion:
    for n, title, fn, budget in CRITERIA:
        if n == number:
            passed, detail, seconds = _timed(fn)
            if budget is not None and seconds >= budget:
                passed = False
                detail += f"; runtime {seconds:.2f} s exceeds {budget} s"
            return Criterion(n, title, bool(passed), detail, seconds)
    raise KeyError(number)


def run_all() -> list[Criterion]:
    return [evaluate(n) for n, *_ in CRITERIA]
