"""Regression checks: tolerance kinds, verdicts and the built-in simulation checks.

Scenario checks compare one named quantity of a run against a target.
Built-in checks cover results that need a dedicated computation (trap
scans, dynamics, mean-field runs) rather than a scheme evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional, Sequence

EXACT_RTOL = 1e-12


@dataclass(frozen=True)
class Verdict:
    id: str
    source: str
    quantity: str
    target: Any
    computed: Optional[float]
    tolerance: str
    passed: bool
    origin: str
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        comp = "n/a" if self.computed is None else f"{self.computed:.6g}"
        tgt = (f"[{self.target[0]:.6g}, {self.target[1]:.6g}]" if isinstance(self.target, (list, tuple))
               else f"{self.target:.6g}")
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{flag} {self.id}: {self.quantity} = {comp}, target {tgt}, {self.tolerance} [{self.source}]{extra}"

    def to_row(self) -> dict:
        return {
            "id": self.id, "source": self.source, "quantity": self.quantity,
            "target": list(self.target) if isinstance(self.target, (list, tuple)) else self.target,
            "computed": self.computed, "tolerance": self.tolerance, "passed": self.passed,
            "origin": self.origin, "detail": self.detail,
        }


def describe_tolerance(kind: str, value: Optional[float]) -> str:
    if kind == "range":
        return "inside range"
    if kind == "exact":
        return "exact"
    template = {
        "relative": "within {:g} relative",
        "factor": "within a factor {:g}",
        "order": "within {:g} decades",
        "absolute": "within +/-{:g}",
    }[kind]
    return template.format(value)


def judge(computed: float, target: Any, kind: str, value: Optional[float] = None) -> bool:
    """True if ``computed`` meets ``target`` under the tolerance ``kind``.

    ``exact`` allows a relative round-off of 1e-12.
    """
    c = float(computed)
    if not math.isfinite(c):
        return False
    if kind == "range":
        lo, hi = target
        return lo <= c <= hi
    t = float(target)
    if kind == "relative":
        return abs(c - t) <= value * abs(t)
    if kind == "absolute":
        return abs(c - t) <= value
    if kind == "exact":
        return math.isclose(c, t, rel_tol=EXACT_RTOL, abs_tol=0.0 if t else EXACT_RTOL)
    if kind == "factor":
        if c <= 0 or t <= 0:
            return False
        return max(c / t, t / c) <= value
    if kind == "order":
        if c <= 0 or t <= 0:
            return False
        return abs(math.log10(c / t)) <= value
    raise ValueError(f"unknown tolerance kind {kind!r}")


def evaluate_check(check: Mapping[str, Any], quantities: Mapping[str, Any], source: str) -> Verdict:
    kind = check["tolerance"]["kind"]
    value = check["tolerance"].get("value")
    q = check["quantity"]
    raw = quantities.get(q)
    tol = describe_tolerance(kind, value)
    if raw is None or isinstance(raw, (str, list, dict)):
        return Verdict(check["id"], source, q, check["target"], None, tol, False, check["origin"],
                       "quantity not produced")
    computed = float(raw)
    return Verdict(check["id"], source, q, check["target"], computed, tol,
                   judge(computed, check["target"], kind, value), check["origin"])


# ----------------------------------------------------------------------------
# built-in checks
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BuiltinCheck:
    id: str
    quantity: str
    target: Any
    kind: str
    value: Optional[float]
    origin: str
    slow: bool
    compute: Callable[[], float]

    def run(self) -> Verdict:
        tol = describe_tolerance(self.kind, self.value)
        computed = float(self.compute())
        return Verdict(self.id, "builtin", self.quantity, self.target, computed, tol,
                       judge(computed, self.target, self.kind, self.value), self.origin)


def _max_cp_epsilon() -> float:
    from .physcore import species
    from .potentials import casimir_polder
    from .trapscape import SurfaceTrapConfig, max_epsilon_before_vanishing

    rb = species("Rb87")
    cfg = SurfaceTrapConfig(rb, casimir_polder(_perfect_c4(), 1.0), 2 * math.pi * 1e4, retune=False)
    return max_epsilon_before_vanishing(cfg)[0]


def _perfect_c4() -> float:
    from .physcore import perfect_conductor_c4, species

    return perfect_conductor_c4(species("Rb87").static_polarizability)


def _magnetic_params(two_photon: bool):
    from .config import find_preset, load
    from .schemes.magnetic import MagneticSchemeParams

    sc = load(find_preset("magnetic_rb87", _builtin_preset_dir()))
    p = dict(sc.params)
    p["two_photon"] = two_photon
    return MagneticSchemeParams.from_config(p)


def _builtin_preset_dir():
    from pathlib import Path

    return Path(__file__).parent / "presets"


def _two_photon_ratio() -> float:
    from .schemes.magnetic import magnetic_g0

    return magnetic_g0(_magnetic_params(False)) / magnetic_g0(_magnetic_params(True))


def _transfer_identity() -> float:
    from .schemes.magnetic import magnetic_g0, transfer_time

    g0 = magnetic_g0(_magnetic_params(False))
    return transfer_time(g0, 4) * 2 * g0 * 2 / math.pi


def _correspondence() -> float:
    from .coupling import single_phonon_coupling
    from .dynamics.classical import (
        displaced_state,
        energy_exchange_frequency,
        integrate_classical,
        resonant_pair,
    )

    w = 2 * math.pi * 1e4
    pair = resonant_pair(0.01, 1e-2, w)
    g0 = single_phonon_coupling(pair)
    T = 2.5 * 2 * math.pi / (2 * g0)
    tr = integrate_classical(pair, displaced_state(pair, 1e-9), T, tol=1e-10,
                             samples=int(T * w / (2 * math.pi) * 16))
    return energy_exchange_frequency(tr, pair) / (2 * g0)


def bec_gpe_setup(points: int = 128, g1d: Optional[float] = None):
    """Condensate of 600 Rb atoms at U0 = 8 hbar w above the beta = 200 surface."""
    from .gpe import SurfaceBecSetup, g1d_from_scattering
    from .physcore import species
    from .potentials import casimir_polder

    g = g1d_from_scattering(5.3e-9, 2 * math.pi * 500) if g1d is None else g1d
    return SurfaceBecSetup(species("Rb87"), casimir_polder(_perfect_c4(), 200.0), 600, g,
                           points=points)


OMEGA_M = 2 * math.pi * 1e4
CONTRAST_DURATION = 10e-3


def _mu_below_barrier() -> float:
    from .gpe import Drive, ground_state

    cfg = bec_gpe_setup().config(OMEGA_M, Drive())
    gs = ground_state(cfg)
    return gs.mu_above_bottom / gs.barrier_height


def _loss_resonance_offset() -> float:
    import numpy as np

    from .gpe import Drive, loss_spectrum, resonance_centre

    cfg = bec_gpe_setup().config(OMEGA_M, Drive())
    grid = OMEGA_M + 2 * math.pi * np.arange(-6.0, 6.1, 1.5)
    rows = loss_spectrum(cfg, grid, 60e-9, OMEGA_M, 3200.0, CONTRAST_DURATION)
    return (resonance_centre(rows) - OMEGA_M) / (OMEGA_M / 3200.0)


def _contrast_ordering() -> float:
    from .gpe import Drive, contrast_curve

    setup = bec_gpe_setup()
    c_res = contrast_curve(setup.config(OMEGA_M, Drive()), [40e-9], CONTRAST_DURATION, OMEGA_M)[0]
    c_off = contrast_curve(setup.config(2 * math.pi * 4e3, Drive()), [40e-9], CONTRAST_DURATION,
                           OMEGA_M)[0]
    return c_res.contrast - c_off.contrast


def spectroscopy_grid() -> list[float]:
    return [OMEGA_M * (0.40 + 0.05 * i) for i in range(16)]


def run_spectroscopy(g1d: Optional[float] = 0.0, amplitude: float = 5e-9, duration: float = 5e-3,
                     grid: Optional[Sequence[float]] = None):
    from .gpe import Drive, mode_spectroscopy

    return mode_spectroscopy(bec_gpe_setup(g1d=g1d), grid or spectroscopy_grid(),
                             Drive(amplitude, OMEGA_M), duration, observable="excitation")


def _spectroscopy_worst() -> float:
    sp = run_spectroscopy()
    ratios = sp.peak_ratios()
    if len(ratios) != 2:
        return math.inf
    return max(abs(ratios[0] / 0.5 - 1), abs(ratios[1] - 1))


BUILTINS: tuple[BuiltinCheck, ...] = (
    BuiltinCheck("surface.max_epsilon", "max |eps| before vanishing (pure CP, 10 kHz)",
                 [0.25, 0.35], "range", None, "reported", False, _max_cp_epsilon),
    BuiltinCheck("magnetic.two_photon_factor", "g0(direct) / g0(two-photon)", 3.0, "exact", None,
                 "reported", False, _two_photon_ratio),
    BuiltinCheck("magnetic.transfer_identity", "t_swap * 2 g0 sqrt(N) / pi", 1.0, "exact", None,
                 "reported", False, _transfer_identity),
    BuiltinCheck("gpe.mu_below_barrier", "mu_c / U0", [0.0, 1.0], "range", None, "reported", False,
                 _mu_below_barrier),
    BuiltinCheck("dynamics.correspondence", "classical exchange frequency / 2 g0", 1.0, "relative",
                 0.01, "derived", True, _correspondence),
    BuiltinCheck("gpe.loss_resonance_centre", "(centre - w_m) / cantilever FWHM", 0.0, "absolute",
                 0.1, "reported", True, _loss_resonance_offset),
    BuiltinCheck("gpe.contrast_ordering", "C(10 kHz trap) - C(4 kHz trap)", [1e-3, 1.0], "range",
                 None, "reported", True, _contrast_ordering),
    BuiltinCheck("gpe.spectroscopy_peaks", "worst relative peak offset", 0.0, "absolute", 0.05,
                 "reported", True, _spectroscopy_worst),
)


def builtin_ids() -> list[str]:
    return [b.id for b in BUILTINS]
