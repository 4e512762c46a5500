"""One-dimensional Gross-Pitaevskii dynamics of a condensate near a vibrating surface.

The condensate wavefunction ``psi(z)`` is normalised to the atom number and
evolves under

    i hbar dpsi/dt = [-hbar^2/2m d^2/dz^2 + V(z, t) + g1D |psi|^2 - i W(z)] psi

with ``V`` the trap plus surface potential, the surface displaced by
``b sin(w_p t + phase)``.  ``W`` is a cosine-ramped absorber placed on the
surface side of the barrier saddle; probability flowing into it counts as
atoms lost from the trap.  Close to the surface the attractive potential is
clamped at a floor a few barrier heights below the saddle so that the
time step is not set by the diverging surface term inside the absorber.

Propagation is symmetric (Strang) split-step Fourier; imaginary-time
propagation with the same splitting gives the ground state.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import curve_fit
from scipy.signal import find_peaks

from .physcore import HBAR, AtomSpecies, DomainError, hz
from .potentials import CouplingPotential
from .trapscape import (
    CombinedPotential1D,
    SurfaceTrapConfig,
    TrapAnalysis,
    analyze,
    distance_for_barrier,
)

#: floor of the real potential, in barrier heights below the saddle
FLOOR_DEPTH = 4.0
#: closest approach of a grid point to the displaced surface
SURFACE_CLEARANCE = 20e-9
#: largest per-period table of potential phase factors
_MAX_TABLE = 8192


class GpeConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Drive:
    amplitude: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0

    def position(self, t: float) -> float:
        return self.amplitude * math.sin(self.frequency * t + self.phase)


@dataclass(frozen=True)
class Absorber:
    """Imaginary potential ``strength * sin^2`` ramp from ``saddle - start_offset`` to the grid edge."""

    start_offset: float
    strength: float


@dataclass(frozen=True)
class GpeConfig:
    potential: CombinedPotential1D
    n_atoms: float
    g1d: float
    z_min: float
    z_max: float
    points: int = 256
    drive: Drive = Drive()
    absorber: Optional[Absorber] = None
    timestep: Optional[float] = None
    loss_rate: float = 0.0

    def __post_init__(self):
        n = self.points
        if n < 16 or n & (n - 1):
            raise DomainError("grid points must be a power of two >= 16")
        if not self.z_max > self.z_min:
            raise DomainError("z_max must exceed z_min")
        if self.n_atoms <= 0 or self.g1d < 0 or self.loss_rate < 0:
            raise DomainError("need N > 0, g1D >= 0 and loss rate >= 0")
        if self.potential.surface is not None:
            gap = self.z_min - self.potential.surface_position - abs(self.drive.amplitude)
            if gap < SURFACE_CLEARANCE:
                raise DomainError(
                    f"grid comes within {gap:.3g} m of the displaced surface; "
                    f"raise z_min or lower the drive amplitude")

    @property
    def atom(self) -> AtomSpecies:
        return self.potential.atom

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.points

    def z(self) -> np.ndarray:
        return self.z_min + self.dz * np.arange(self.points)

    def k(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.dz)

    def with_drive(self, drive: Drive) -> "GpeConfig":
        return replace(self, drive=drive)

    def refined(self, factor: int = 2) -> "GpeConfig":
        """Same box with ``factor`` times more points (for convergence checks)."""
        return replace(self, points=self.points * factor,
                       timestep=None if self.timestep is None else self.timestep / factor**2)

    def metadata(self) -> dict:
        p = self.potential
        return {
            "species": p.atom.name,
            "bare_frequency_rad_s": p.bare_frequency,
            "bare_minimum_m": p.bare_minimum,
            "surface": None if p.surface is None else p.surface.to_dict(),
            "surface_position_m": p.surface_position,
            "gravity": p.gravity_on,
            "n_atoms": self.n_atoms,
            "g1d_j_m": self.g1d,
            "grid": {"z_min_m": self.z_min, "z_max_m": self.z_max, "points": self.points},
            "drive": asdict(self.drive),
            "absorber": None if self.absorber is None else asdict(self.absorber),
            "timestep_s": self.timestep,
            "loss_rate_per_s": self.loss_rate,
        }


# ----------------------------------------------------------------------------
# operators on the grid
# ----------------------------------------------------------------------------


class _Grid:
    """Precomputed arrays for one configuration."""

    def __init__(self, cfg: GpeConfig):
        self.cfg = cfg
        self.z = cfg.z()
        self.dz = cfg.dz
        m = cfg.atom.mass
        self.kinetic = HBAR**2 * cfg.k() ** 2 / (2 * m)
        pot = cfg.potential
        self.surface = pot.surface
        self.static = np.asarray(pot.with_surface(None).derivative(0, self.z), dtype=float)
        self.analysis: Optional[TrapAnalysis] = analyze(pot) if pot.surface is not None else None
        self.floor = -np.inf
        self.absorb = np.zeros_like(self.z)
        a = self.analysis
        if a is not None and not a.vanished and math.isfinite(a.barrier_height):
            v_sad = float(pot.derivative(0, a.saddle_position))
            self.floor = v_sad - FLOOR_DEPTH * a.barrier_height
            if cfg.absorber is not None:
                start = a.saddle_position - cfg.absorber.start_offset
                if start <= cfg.z_min:
                    raise DomainError("absorber starts below the grid")
                s = np.clip((start - self.z) / (start - cfg.z_min), 0.0, 1.0)
                self.absorb = cfg.absorber.strength * np.sin(0.5 * np.pi * s) ** 2
        elif cfg.absorber is not None and a is not None:
            raise DomainError("trap has vanished: no barrier to place the absorber behind")

    def real_potential(self, t: float) -> np.ndarray:
        v = self.static
        if self.surface is not None:
            zs = self.cfg.potential.surface_position + self.cfg.drive.position(t)
            v = v + self.surface.coefficient * (self.z - zs) ** (-self.surface.power)
        return np.maximum(v, self.floor)

    def kinetic_energy(self, psi: np.ndarray) -> float:
        phik = np.fft.fft(psi)
        return float(np.sum(self.kinetic * np.abs(phik) ** 2) * self.dz / self.cfg.points)

    def norm(self, psi: np.ndarray) -> float:
        return float(np.sum(np.abs(psi) ** 2) * self.dz)

    def energy(self, psi: np.ndarray, t: float = 0.0) -> float:
        dens = np.abs(psi) ** 2
        pot = np.sum((self.real_potential(t) + 0.5 * self.cfg.g1d * dens) * dens) * self.dz
        return self.kinetic_energy(psi) + float(pot)

    def chemical_potential(self, psi: np.ndarray, t: float = 0.0) -> float:
        dens = np.abs(psi) ** 2
        pot = np.sum((self.real_potential(t) + self.cfg.g1d * dens) * dens) * self.dz
        return (self.kinetic_energy(psi) + float(pot)) / self.norm(psi)

    def max_step(self, t: float = 0.0) -> float:
        """pi hbar / (E_kin,max + potential spread) for the current grid."""
        v = self.real_potential(t)
        spread = float(np.max(v) - np.min(v))
        return math.pi * HBAR / (float(np.max(self.kinetic)) + spread)


def _default_step(grid: _Grid) -> float:
    return 0.5 * grid.max_step()


# ----------------------------------------------------------------------------
# ground state
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GroundState:
    z: np.ndarray
    psi: np.ndarray
    chemical_potential: float
    energy: float
    iterations: int
    residual: float
    barrier_height: Optional[float]

    @property
    def bound(self) -> bool:
        """Chemical potential measured from the trap bottom lies below the barrier."""
        return self.barrier_height is None or self.mu_above_bottom < self.barrier_height

    mu_above_bottom: float = 0.0


def ground_state(cfg: GpeConfig, tol: float = 1e-12, max_iter: int = 400_000) -> GroundState:
    """Imaginary-time relaxation until the relative energy change per step is below ``tol``."""
    grid = _Grid(cfg)
    a = grid.analysis
    if a is not None and a.vanished:
        raise DomainError("trap has vanished: no ground state")
    pot = cfg.potential
    z0 = a.minimum_position if a is not None else pot.bare_minimum
    w = a.effective_frequency if a is not None else pot.bare_frequency
    width = math.sqrt(HBAR / (cfg.atom.mass * w))
    if cfg.g1d > 0:
        mu_tf = (3 * cfg.g1d * cfg.n_atoms * w * math.sqrt(cfg.atom.mass) / (4 * math.sqrt(2))) ** (2 / 3)
        width = max(width, math.sqrt(2 * mu_tf / (cfg.atom.mass * w**2)) / 2)
    psi = np.exp(-((grid.z - z0) ** 2) / (2 * width**2)).astype(complex)
    psi *= math.sqrt(cfg.n_atoms / grid.norm(psi))

    dtau = cfg.timestep or _default_step(grid)
    v = grid.real_potential(0.0)
    if a is not None and math.isfinite(a.barrier_height):
        # metastable state: wall off the surface side of the saddle
        v_sad = float(pot.derivative(0, a.saddle_position))
        v = np.where(grid.z < a.saddle_position, v_sad + grid.absorb + a.barrier_height, v)
    k_half = np.exp(-0.5 * grid.kinetic * dtau / HBAR)
    e_old = grid.energy(psi)
    residual = math.inf
    for it in range(1, max_iter + 1):
        psi = np.fft.ifft(k_half * np.fft.fft(psi))
        psi *= np.exp(-(v + cfg.g1d * np.abs(psi) ** 2) * dtau / HBAR)
        psi = np.fft.ifft(k_half * np.fft.fft(psi))
        psi *= math.sqrt(cfg.n_atoms / grid.norm(psi))
        if it % 10 == 0:
            e_new = grid.energy(psi)
            residual = abs(e_new - e_old) / (10 * abs(e_new))
            e_old = e_new
            if residual < tol:
                break
    else:
        raise GpeConvergenceError(
            f"imaginary-time propagation did not converge in {max_iter} steps "
            f"(relative energy change {residual:.2e} per step)", residual)
    mu = grid.chemical_potential(psi)
    bottom = float(pot.derivative(0, z0))
    barrier = None if a is None or not math.isfinite(a.barrier_height) else a.barrier_height
    return GroundState(grid.z, psi, mu, grid.energy(psi), it, residual, barrier, mu - bottom)


# ----------------------------------------------------------------------------
# real-time evolution
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GpeResult:
    times: np.ndarray
    norm: np.ndarray
    com: np.ndarray
    energy: np.ndarray
    z: np.ndarray
    snapshots: tuple[np.ndarray, ...]
    snapshot_times: tuple[float, ...]
    timestep: float
    steps: int
    metadata: dict = field(default_factory=dict)

    @property
    def remaining_fraction(self) -> float:
        return float(self.norm[-1])

    @property
    def loss(self) -> float:
        return 1.0 - float(self.norm[-1])

    def snapshot_csv(self, index: int = -1) -> str:
        psi = self.snapshots[index]
        lines = ["z_m,density_per_m,re_psi,im_psi"]
        for zi, p in zip(self.z, psi):
            vals = (zi, abs(p) ** 2, p.real, p.imag)
            lines.append(",".join(repr(float(v)) for v in vals))
        return "\n".join(lines) + "\n"

    def metadata_json(self) -> str:
        return json.dumps(self.metadata, indent=2, sort_keys=True) + "\n"

    def trajectory_csv(self) -> str:
        lines = ["t_s,norm_fraction,com_m,energy_j"]
        for row in zip(self.times, self.norm, self.com, self.energy):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def contrast(remaining_reference: float, remaining_driven: float) -> float:
    """(N_r - N_a) / N_r, clipped to [0, 1]."""
    if remaining_reference <= 0:
        raise DomainError("reference run lost all atoms")
    return float(min(1.0, max(0.0, (remaining_reference - remaining_driven) / remaining_reference)))


def evolve(
    cfg: GpeConfig,
    duration: float,
    initial: Optional[GroundState] = None,
    samples: int = 200,
    snapshots: int = 2,
) -> GpeResult:
    """Real-time split-step propagation with the driven surface.

    Refuses time steps above pi hbar / (E_kin,max + potential spread).  With
    a drive the step is shortened so that a whole number of steps fits in
    one drive period, which lets the potential phase factors be tabulated;
    the run then covers ``duration`` rounded up to a whole step.
    """
    if not duration > 0:
        raise DomainError("duration must be positive")
    grid = _Grid(cfg)
    limit = min(grid.max_step(0.0), grid.max_step(0.5 * math.pi / cfg.drive.frequency)
                if cfg.drive.frequency else math.inf)
    dt = cfg.timestep or 0.5 * limit
    if dt > limit * (1 + 1e-12):
        raise DomainError(f"time step {dt:g} s exceeds the split-step bound {limit:g} s")
    drive = cfg.drive
    driven = grid.surface is not None and drive.amplitude != 0.0 and drive.frequency != 0.0
    per_period = 0
    if driven:
        period = 2 * math.pi / drive.frequency
        per_period = int(math.ceil(period / dt - 1e-9))
        if per_period <= _MAX_TABLE:
            dt = period / per_period
            n_steps = max(1, int(math.ceil(duration / dt - 1e-9)))
        else:
            per_period = 0
    if not per_period:
        n_steps = max(1, int(math.ceil(duration / dt - 1e-9)))
        dt = duration / n_steps
    gs = initial or ground_state(cfg)
    psi = gs.psi.astype(complex).copy()
    n0 = grid.norm(psi)

    k_half = np.exp(-0.5j * grid.kinetic * dt / HBAR)
    k_full = k_half * k_half
    damp = np.exp(-(grid.absorb / HBAR + 0.5 * cfg.loss_rate) * dt)
    record_every = max(1, n_steps // samples)
    snap_every = max(1, n_steps // max(1, snapshots - 1)) if snapshots > 1 else n_steps + 1

    if per_period:
        table = np.array([np.exp(-1j * grid.real_potential((j + 0.5) * dt) * dt / HBAR) * damp
                          for j in range(per_period)])
    else:
        table = None
        static_factor = np.exp(-1j * grid.real_potential(0.0) * dt / HBAR) * damp
    g_phase = cfg.g1d * dt / HBAR

    z = grid.z
    times, norms, coms, energies = [], [], [], []
    snaps, snap_t = [psi.copy()], [0.0]

    def record(t, out):
        dens = np.abs(out) ** 2
        nrm = float(np.sum(dens) * grid.dz)
        times.append(t)
        norms.append(nrm / n0)
        coms.append(float(np.sum(z * dens) * grid.dz / nrm))
        energies.append(grid.energy(out, t))

    record(0.0, psi)
    fft, ifft = np.fft.fft, np.fft.ifft
    # K/2 V K V ... V K/2 with the inner half steps merged
    psi = ifft(k_half * fft(psi))
    for n in range(1, n_steps + 1):
        factor = table[(n - 1) % per_period] if per_period else static_factor
        if g_phase:
            factor = factor * np.exp(-1j * g_phase * (psi.real**2 + psi.imag**2))
        psi = psi * factor
        phik = fft(psi)
        want_record = n % record_every == 0 or n == n_steps
        want_snap = (n % snap_every == 0 or n == n_steps) and len(snaps) < snapshots
        if want_record or want_snap or n == n_steps:
            out = ifft(k_half * phik)
            if want_record:
                record(n * dt, out)
            if want_snap:
                snaps.append(out.copy())
                snap_t.append(n * dt)
            if n == n_steps:
                psi = out
                break
        psi = ifft(k_full * phik)
    if snap_t[-1] != n_steps * dt:
        snaps[-1], snap_t[-1] = psi.copy(), n_steps * dt
    meta = cfg.metadata()
    meta.update({"duration_s": n_steps * dt, "timestep_s": dt, "steps": n_steps,
                 "ground_state_tolerance": 1e-12, "chemical_potential_j": gs.chemical_potential})
    return GpeResult(np.array(times), np.array(norms), np.array(coms), np.array(energies), z,
                     tuple(snaps), tuple(snap_t), dt, n_steps, meta)


# ----------------------------------------------------------------------------
# experiment-like setup
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceBecSetup:
    """Condensate in a re-tuned trap held ``barrier_hbar_omega`` below the saddle.

    Builds a :class:`GpeConfig` for any trap frequency with the grid spanning
    the absorber, the barrier and the trap.
    """

    atom: AtomSpecies
    surface: CouplingPotential
    n_atoms: float
    g1d: float
    barrier_hbar_omega: float = 8.0
    points: int = 256
    max_drive_amplitude: float = 200e-9
    absorber_strength_hbar_omega: float = 20.0
    loss_rate: float = 0.0

    def config(self, omega_a: float, drive: Drive = Drive()) -> GpeConfig:
        if abs(drive.amplitude) > self.max_drive_amplitude:
            raise DomainError("drive amplitude exceeds the setup's grid clearance")
        trap_cfg = SurfaceTrapConfig(self.atom, self.surface, omega_a)
        d = distance_for_barrier(trap_cfg, self.barrier_hbar_omega)
        pot = trap_cfg.trap(d)
        a = analyze(pot)
        a_ho = math.sqrt(HBAR / (self.atom.mass * omega_a))
        span = a.minimum_position - a.saddle_position
        z_min = max(a.saddle_position - 0.6 * span, self.max_drive_amplitude + 2 * SURFACE_CLEARANCE)
        z_max = a.minimum_position + span + 8 * a_ho
        absorber = Absorber(0.1 * span, self.absorber_strength_hbar_omega * HBAR * omega_a)
        return GpeConfig(pot, self.n_atoms, self.g1d, z_min, z_max, self.points, drive, absorber,
                         loss_rate=self.loss_rate)


def cantilever_amplitude(peak: float, omega_p: float, omega_m: float, quality_factor: float) -> float:
    """Driven amplitude of a damped oscillator normalised to ``peak`` on resonance."""
    gam = omega_m / quality_factor
    return peak * omega_p * gam / math.hypot(omega_m**2 - omega_p**2, omega_p * gam)


@dataclass(frozen=True)
class ContrastRow:
    amplitude: float
    frequency: float
    remaining: float
    contrast: float


def _reference_remaining(cfg: GpeConfig, duration: float, gs: GroundState) -> float:
    return evolve(cfg.with_drive(Drive()), duration, gs, samples=2, snapshots=1).remaining_fraction


def contrast_curve(
    cfg: GpeConfig,
    b_grid: Sequence[float],
    duration: float,
    frequency: Optional[float] = None,
) -> list[ContrastRow]:
    """Contrast versus drive amplitude at fixed drive frequency."""
    b = np.asarray(b_grid, dtype=float)
    if np.any(np.diff(b) < 0):
        raise DomainError("amplitude grid must be monotone non-decreasing")
    w = cfg.drive.frequency if frequency is None else frequency
    gs = ground_state(cfg)
    ref = _reference_remaining(cfg, duration, gs)
    rows = []
    for bi in b:
        rem = ref if bi == 0 else evolve(cfg.with_drive(Drive(float(bi), w)), duration, gs,
                                         samples=2, snapshots=1).remaining_fraction
        rows.append(ContrastRow(float(bi), w, rem, contrast(ref, rem)))
    return rows


def loss_spectrum(
    cfg: GpeConfig,
    omega_p_grid: Sequence[float],
    peak_amplitude: float,
    omega_m: float,
    quality_factor: float,
    duration: float,
) -> list[ContrastRow]:
    """Contrast versus drive frequency with a Lorentzian cantilever response."""
    gs = ground_state(cfg)
    ref = _reference_remaining(cfg, duration, gs)
    rows = []
    for wp in omega_p_grid:
        b = cantilever_amplitude(peak_amplitude, float(wp), omega_m, quality_factor)
        rem = evolve(cfg.with_drive(Drive(b, float(wp))), duration, gs, samples=2,
                     snapshots=1).remaining_fraction
        rows.append(ContrastRow(b, float(wp), rem, contrast(ref, rem)))
    return rows


def resonance_centre(rows: Sequence[ContrastRow]) -> float:
    """Centre of a contrast-versus-frequency resonance by a Lorentzian fit."""
    w = np.array([r.frequency for r in rows])
    c = np.array([r.contrast for r in rows])
    i = int(np.argmax(c))
    half = max(np.ptp(w) / 10, 1e-12)

    def lor(x, A, x0, hw, off):
        return A / (1 + ((x - x0) / hw) ** 2) + off

    try:
        popt, _ = curve_fit(lor, w, c, p0=[c[i], w[i], half, 0.0], maxfev=20000)
        if w.min() <= popt[1] <= w.max():
            return float(popt[1])
    except RuntimeError:
        pass
    return float(np.sum(w * c) / np.sum(c))


@dataclass(frozen=True)
class SpectroscopyRow:
    omega_a: float
    loss: float
    excitation: float
    width_growth: float

    def to_row(self) -> dict:
        return {"omega_a_hz": hz(self.omega_a), "loss": self.loss,
                "excitation_hbar_omega": self.excitation, "width_growth": self.width_growth}


@dataclass(frozen=True)
class Spectroscopy:
    rows: tuple[SpectroscopyRow, ...]
    peaks: tuple[float, ...]
    drive_frequency: float
    observable: str

    def peak_ratios(self) -> tuple[float, ...]:
        return tuple(p / self.drive_frequency for p in self.peaks)

    def response(self) -> np.ndarray:
        return np.array([getattr(r, self.observable) for r in self.rows])


def find_resonances(x: Sequence[float], y: Sequence[float], n_peaks: int = 2,
                    rel_prominence: float = 0.02, log: bool = False) -> tuple[float, ...]:
    """Positions of the ``n_peaks`` most prominent maxima of ``y`` (edges count).

    With ``log`` the search runs on log10 of the response floored at 1e-12,
    which picks out weak but sharp resonances next to a strong one.
    """
    y = np.asarray(y, dtype=float)
    if log:
        y = np.log10(np.maximum(y, 1e-12))
    if y.size == 0 or np.ptp(y) <= 1e-12 * max(1.0, abs(y).max()):
        return ()
    padded = np.concatenate([[y.min()], y, [y.min()]])
    idx, props = find_peaks(padded, prominence=rel_prominence * np.ptp(y))
    order = np.argsort(props["prominences"])[::-1][:n_peaks]
    return tuple(sorted(float(x[i - 1]) for i in idx[order]))


def mode_spectroscopy(
    setup: SurfaceBecSetup,
    omega_a_grid: Sequence[float],
    drive: Drive,
    duration: float,
    n_peaks: int = 2,
    observable: str = "loss",
) -> Spectroscopy:
    """Response versus trap frequency at fixed drive; the trap is re-solved per point.

    ``observable`` selects the response used for peak finding: ``"loss"``
    (fraction of atoms absorbed), ``"excitation"`` (energy gained per
    remaining atom in units of hbar w_a) or ``"width_growth"``.
    """
    if observable not in ("loss", "excitation", "width_growth"):
        raise DomainError(f"unknown spectroscopy observable {observable!r}")
    rows = []
    for wa in omega_a_grid:
        cfg = setup.config(float(wa), drive)
        gs = ground_state(cfg)
        res = evolve(cfg, duration, gs, samples=50, snapshots=1)
        per_atom0 = gs.energy / cfg.n_atoms
        per_atom1 = res.energy[-1] / (res.norm[-1] * cfg.n_atoms)
        exc = (per_atom1 - per_atom0) / (HBAR * float(wa))
        growth = _width(res.z, res.snapshots[-1]) / _width(res.z, gs.psi)
        rows.append(SpectroscopyRow(float(wa), res.loss, exc, growth))
    sp = Spectroscopy(tuple(rows), (), drive.frequency, observable)
    peaks = find_resonances(list(omega_a_grid), sp.response(), n_peaks,
                            log=observable == "excitation")
    return replace(sp, peaks=peaks)


def _width(z: np.ndarray, psi: np.ndarray) -> float:
    dens = np.abs(psi) ** 2
    nrm = dens.sum()
    mean = float(np.sum(z * dens) / nrm)
    return math.sqrt(float(np.sum((z - mean) ** 2 * dens) / nrm))


def thomas_fermi_mu(g1d: float, n_atoms: float, omega: float, mass: float) -> float:
    """mu = (3 g N omega sqrt(m) / (4 sqrt 2))^(2/3) for a 1D harmonic trap."""
    return (3 * g1d * n_atoms * omega * math.sqrt(mass) / (4 * math.sqrt(2))) ** (2 / 3)


def g1d_from_scattering(scattering_length: float, transverse_frequency: float) -> float:
    """Standard 1D reduction 2 hbar w_perp a_s (no confinement-induced resonance)."""
    return 2 * HBAR * transverse_frequency * scattering_length


def linear_response_amplitude(result: GpeResult) -> float:
    """Peak-to-peak half range of the centre of mass."""
    return 0.5 * float(np.ptp(result.com))


def harmonic_config(atom: AtomSpecies, omega: float, n_atoms: float, g1d: float,
                    points: int = 256, half_width: Optional[float] = None) -> GpeConfig:
    """Pure harmonic trap centred at zero, for reference checks."""
    pot = CombinedPotential1D(atom, omega, 0.0, None, 0.0, False)
    a_ho = math.sqrt(HBAR / (atom.mass * omega))
    L = half_width
    if L is None:
        r_tf = math.sqrt(2 * thomas_fermi_mu(g1d, n_atoms, omega, atom.mass) / (atom.mass * omega**2)) if g1d else 0.0
        L = max(10 * a_ho, 1.6 * r_tf)
    return GpeConfig(pot, n_atoms, g1d, -L, L, points)


__all__ = [
    "Absorber", "ContrastRow", "Drive", "GpeConfig", "GpeConvergenceError", "GpeResult",
    "GroundState", "Spectroscopy", "SpectroscopyRow", "SurfaceBecSetup", "cantilever_amplitude",
    "contrast", "contrast_curve", "evolve", "g1d_from_scattering", "ground_state",
    "harmonic_config", "linear_response_amplitude", "loss_spectrum", "mode_spectroscopy",
    "resonance_centre", "thomas_fermi_mu",
]
