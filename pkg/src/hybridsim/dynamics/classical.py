"""Classical motion of atom and oscillator in the full coupling potential.

The Hamiltonian is

    H = p_a^2/2m + p_m^2/2M + 1/2 m w_a0^2 (z_a - Z_a0)^2
        + 1/2 M w_m0^2 (z_m - Z_m0)^2 + U_c(z_m - z_a),

with no Taylor expansion of U_c.  The equilibrium is placed at z_a = 0,
z_m = d, which fixes the bare trap centres through the static shifts.
Integration runs in units of the bare atomic period with an adaptive
8th-order Runge-Kutta scheme; energy conservation is monitored rather than
enforced.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import curve_fit

from ..coupling import CoupledPair, effective_frequencies, equilibrium_shifts
from ..physcore import AtomSpecies, DomainError, Environment, OscillatorSpec, TrapSpec
from ..potentials import CouplingPotential, custom_power_law


@dataclass(frozen=True)
class ClassicalState:
    z_a: float
    z_m: float
    p_a: float
    p_m: float
    t: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.z_a, self.z_m, self.p_a, self.p_m, self.t)):
            raise DomainError("classical state components must be finite")


@dataclass(frozen=True)
class ClassicalTrajectory:
    t: np.ndarray
    z_a: np.ndarray
    z_m: np.ndarray
    p_a: np.ndarray
    p_m: np.ndarray
    energy: np.ndarray
    escaped: bool
    energy_drift: float
    equilibrium: tuple[float, float] = (0.0, 0.0)
    bare_centres: tuple[float, float] = (0.0, 0.0)
    atom_maxima: np.ndarray = field(default_factory=lambda: np.empty(0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_s", "z_a_m", "z_m_m", "p_a_kg_m_per_s", "p_m_kg_m_per_s", "energy_j"])
        for row in zip(self.t, self.z_a, self.z_m, self.p_a, self.p_m, self.energy):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


class _Model:
    def __init__(self, pair: CoupledPair, oscillator_fixed: bool):
        self.m = pair.atom.mass
        self.M = pair.oscillator.effective_mass
        self.wa0 = pair.trap.bare_frequency
        self.wm0 = pair.oscillator.frequency
        self.pot: CouplingPotential = pair.potential
        self.d = pair.equilibrium_distance
        self.fixed = oscillator_fixed
        grad = self.pot.derivative(1, self.d)
        self.Za0 = -grad / (self.m * self.wa0**2)
        self.Zm0 = self.d + grad / (self.M * self.wm0**2)
        # scaled units: time 1/wa0, length d
        self.L = self.d
        self.T = 1.0 / self.wa0

    def energy(self, za, zm, pa, pm):
        x = zm - za
        return (pa**2 / (2 * self.m) + (0.0 if self.fixed else pm**2 / (2 * self.M))
                + 0.5 * self.m * self.wa0**2 * (za - self.Za0) ** 2
                + (0.0 if self.fixed else 0.5 * self.M * self.wm0**2 * (zm - self.Zm0) ** 2)
                + self.pot(x))

    def rhs_function(self):
        """Right-hand side in scaled units, with the power-law force inlined."""
        m, M, wa0sq, wm0sq = self.m, self.M, self.wa0**2, self.wm0**2
        L, T2 = self.L, self.T**2
        Za0, Zm0, fixed = self.Za0, self.Zm0, self.fixed
        c1 = -self.pot.coefficient * self.pot.power
        e1 = -self.pot.power - 1.0
        lo, hi = self.pot.valid_range
        ka, km = T2 / (m * L), T2 / (M * L)

        def rhs(tau, y):
            za, zm = y[0] * L, y[1] * L
            x = min(max(zm - za, lo), hi)
            up = c1 * x**e1
            acc_a = (-m * wa0sq * (za - Za0) + up) * ka
            acc_m = 0.0 if fixed else (-M * wm0sq * (zm - Zm0) - up) * km
            return [y[2], y[3], acc_a, acc_m]

        return rhs


def integrate_classical(
    pair: CoupledPair,
    initial: ClassicalState,
    duration: float,
    tol: float = 1e-10,
    samples: Optional[int] = None,
    oscillator_fixed: bool = False,
    max_step: Optional[float] = None,
) -> ClassicalTrajectory:
    """Integrate the full two-body motion.

    Parameters
    ----------
    pair
        Coupled pair; its equilibrium sits at z_a = 0, z_m = d.
    initial
        Start state in absolute coordinates.
    duration
        Simulated time in seconds.
    tol
        Target relative energy error.  The integrator runs at ``tol / 20``
        because local errors accumulate over many periods.
    samples
        Number of evenly spaced output points (default ~50 per bare period).
    oscillator_fixed
        Hold the oscillator at rest (infinite-mass limit).

    Returns
    -------
    ClassicalTrajectory
        Truncated with ``escaped=True`` if the separation leaves the
        potential's valid range, i.e. the atom fell over the barrier.
    """
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if not duration > 0:
        raise DomainError("duration must be positive")
    model = _Model(pair, oscillator_fixed)
    lo, hi = pair.potential.valid_range
    sep0 = initial.z_m - initial.z_a
    if not lo < sep0 < hi:
        raise DomainError("initial separation outside the potential's valid range")
    if oscillator_fixed and initial.p_m != 0:
        raise DomainError("a fixed oscillator cannot carry momentum")

    L, T = model.L, model.T
    y0 = [initial.z_a / L, initial.z_m / L, initial.p_a * T / (model.m * L),
          0.0 if oscillator_fixed else initial.p_m * T / (model.M * L)]
    tau_end = duration / T
    n = samples or max(200, int(50 * tau_end / (2 * math.pi)))
    t_eval = np.linspace(0.0, tau_end, n)

    def near_surface(tau, y):
        return (y[1] - y[0]) * L - lo * (1.0 + 1e-6)

    def beyond_far(tau, y):
        return hi * (1.0 - 1e-6) - (y[1] - y[0]) * L

    def atom_turn(tau, y):
        return y[2]

    near_surface.terminal = beyond_far.terminal = True
    atom_turn.direction = -1
    sol = solve_ivp(
        model.rhs_function(), (0.0, tau_end), y0, method="DOP853", t_eval=t_eval,
        rtol=tol / 20, atol=tol * 5e-5, events=(near_surface, beyond_far, atom_turn),
        max_step=np.inf if max_step is None else max_step / T,
    )
    if sol.status == -1:
        raise RuntimeError(f"classical integration failed: {sol.message}")
    escaped = sol.status == 1
    za, zm = sol.y[0] * L, sol.y[1] * L
    pa = sol.y[2] * model.m * L / T
    pm = sol.y[3] * model.M * L / T
    t = initial.t + sol.t * T
    E = model.energy(za, zm, pa, pm)
    E_eq = model.energy(0.0, model.d, 0.0, 0.0)
    excitation = abs(E[0] - E_eq) if len(E) else 0.0
    drift = float(np.max(np.abs(E - E[0])) / excitation) if excitation > 0 else 0.0
    return ClassicalTrajectory(
        t=t, z_a=za, z_m=zm, p_a=pa, p_m=pm, energy=E, escaped=escaped, energy_drift=drift,
        equilibrium=(0.0, model.d), bare_centres=(model.Za0, model.Zm0),
        atom_maxima=initial.t + np.asarray(sol.t_events[2]) * T,
    )


def oscillation_period(traj: ClassicalTrajectory) -> float:
    """Mean spacing of successive atomic turning points (position maxima)."""
    tm = traj.atom_maxima
    if len(tm) < 2:
        raise ValueError("need at least two turning points to extract a period")
    return float((tm[-1] - tm[0]) / (len(tm) - 1))


def normal_mode_frequencies(pair: CoupledPair) -> tuple[float, float]:
    """Linearised normal-mode frequencies from the mass-weighted stiffness matrix."""
    wa, wm = effective_frequencies(pair)
    k = pair.curvature()
    m, M = pair.atom.mass, pair.oscillator.effective_mass
    K = np.array([[wa**2, -k / math.sqrt(m * M)], [-k / math.sqrt(m * M), wm**2]])
    lo, hi = np.sqrt(np.linalg.eigvalsh(K))
    return float(lo), float(hi)


def atom_mode_energy(traj: ClassicalTrajectory, pair: CoupledPair) -> np.ndarray:
    """Harmonic energy of the atomic excursion around its coupled equilibrium."""
    wa, _ = effective_frequencies(pair)
    m = pair.atom.mass
    dz = traj.z_a - traj.equilibrium[0]
    return traj.p_a**2 / (2 * m) + 0.5 * m * wa**2 * dz**2


def energy_exchange_frequency(traj: ClassicalTrajectory, pair: CoupledPair) -> float:
    """Angular frequency at which energy sloshes between atom and oscillator.

    The dominant slow frequency of the atomic mode energy is located from
    its spectrum and refined by a least-squares sinusoid fit.
    """
    e = atom_mode_energy(traj, pair)
    t = traj.t - traj.t[0]
    y = e / np.max(e)
    dt = t[1] - t[0]
    spec = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(len(y), dt) * 2 * math.pi
    wa, _ = effective_frequencies(pair)
    slow = (freqs > 0) & (freqs < 0.5 * wa)
    guess = freqs[slow][np.argmax(spec[slow])]

    def model(tt, c, a, b, w):
        return c + a * np.cos(w * tt) + b * np.sin(w * tt)

    popt, _ = curve_fit(model, t, y, p0=[y.mean(), 0.5, 0.0, guess], maxfev=20000)
    return abs(float(popt[3]))


def resonant_pair(
    epsilon: float,
    mass_ratio: float,
    omega: float,
    distance: float = 1e-6,
    atom: Optional[AtomSpecies] = None,
    power: float = 4.0,
) -> CoupledPair:
    """Pair whose effective frequencies are both ``omega`` with a given eps.

    A power-law potential is scaled so U_c''(d) = eps m omega^2 and the bare
    frequencies are lowered to compensate the curvature.
    """
    from ..physcore import species

    atom = atom or species("Rb87")
    m = atom.mass
    M = m / mass_ratio
    curv = epsilon * m * omega**2
    coef = curv * distance ** (power + 2) / (power * (power + 1))
    pot = custom_power_law(coef, power)
    wa0 = math.sqrt(omega**2 - curv / m)
    wm0 = math.sqrt(omega**2 - curv / M)
    return CoupledPair(
        atom=atom,
        trap=TrapSpec(wa0),
        oscillator=OscillatorSpec(M, wm0, 1e12),
        potential=pot,
        equilibrium_distance=distance,
        environment=Environment(0.0),
    )


def displaced_state(pair: CoupledPair, atom_offset: float = 0.0, oscillator_offset: float = 0.0
                    ) -> ClassicalState:
    """Start at rest displaced from the coupled equilibrium."""
    return ClassicalState(atom_offset, pair.equilibrium_distance + oscillator_offset, 0.0, 0.0)


__all__ = [
    "ClassicalState", "ClassicalTrajectory", "integrate_classical", "oscillation_period",
    "normal_mode_frequencies", "atom_mode_energy", "energy_exchange_frequency",
    "resonant_pair", "displaced_state", "equilibrium_shifts",
]
