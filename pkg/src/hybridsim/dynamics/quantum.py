"""Linearised atom-oscillator dynamics in a truncated Fock space.

States live on H_atom (x) H_mech with the atom sector either a two-level
system, a bosonic mode (collective c.o.m. motion) or the symmetric Dicke
ladder of N two-level atoms.  Hamiltonians are in the frame rotating at
the mechanical frequency; rates are angular (rad/s) and hbar = 1.

The Lindblad equation is integrated with fixed-step classical RK4 on a
sparse Liouvillian; trace and Hermiticity are preserved up to round-off.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.optimize import curve_fit

from ..physcore import DomainError

AtomKind = Literal["tls", "fock", "dicke"]

INVARIANT_TOL = 1e-8
CUTOFF_POPULATION_LIMIT = 1e-6


class CutoffError(RuntimeError):
    """The mechanical Fock truncation is too small for the evolving state."""

    def __init__(self, message: str, required_cutoff: int):
        super().__init__(message)
        self.required_cutoff = required_cutoff


def auto_cutoff(n_th_target: float) -> int:
    return max(20, int(math.ceil(8 * (n_th_target + 1))))


def required_cutoff(mean_n: float, limit: float = CUTOFF_POPULATION_LIMIT) -> int:
    """Smallest thermal-like cutoff whose top two levels hold less than ``limit``."""
    if mean_n <= 0:
        return 2
    q = mean_n / (mean_n + 1)
    return int(math.ceil(math.log(limit / 2) / math.log(q))) + 2


# ----------------------------------------------------------------------------
# operators
# ----------------------------------------------------------------------------


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def dicke_lowering(n_atoms: int) -> np.ndarray:
    """J- on the symmetric ladder indexed by excitation number k = 0..N."""
    k = np.arange(1, n_atoms + 1)
    return np.diag(np.sqrt(k * (n_atoms - k + 1.0)), 1).astype(complex)


@dataclass(frozen=True)
class Space:
    atom_kind: AtomKind
    atom_dim: int
    mech_dim: int
    n_atoms: int = 1

    def __post_init__(self):
        if self.mech_dim < 2 or self.atom_dim < 2:
            raise DomainError("each sector needs at least two levels")
        if self.atom_kind == "tls" and self.atom_dim != 2:
            raise DomainError("a two-level atom has dimension 2")
        if self.atom_kind == "dicke" and self.atom_dim != self.n_atoms + 1:
            raise DomainError("Dicke sector of N atoms has dimension N + 1")

    @classmethod
    def tls(cls, mech_dim: int) -> "Space":
        return cls("tls", 2, mech_dim)

    @classmethod
    def fock(cls, atom_dim: int, mech_dim: int) -> "Space":
        return cls("fock", atom_dim, mech_dim)

    @classmethod
    def dicke(cls, n_atoms: int, mech_dim: int) -> "Space":
        return cls("dicke", n_atoms + 1, mech_dim, n_atoms)

    @property
    def dim(self) -> int:
        return self.atom_dim * self.mech_dim

    def atom_lowering(self) -> np.ndarray:
        if self.atom_kind == "dicke":
            return dicke_lowering(self.n_atoms)
        return destroy(self.atom_dim)

    def a(self) -> np.ndarray:
        return np.kron(self.atom_lowering(), np.eye(self.mech_dim))

    def b(self) -> np.ndarray:
        return np.kron(np.eye(self.atom_dim), destroy(self.mech_dim))

    def atom_number(self) -> np.ndarray:
        n = np.diag(np.arange(self.atom_dim, dtype=float)).astype(complex)
        return np.kron(n, np.eye(self.mech_dim))

    def mech_number(self) -> np.ndarray:
        n = np.diag(np.arange(self.mech_dim, dtype=float)).astype(complex)
        return np.kron(np.eye(self.atom_dim), n)


# ----------------------------------------------------------------------------
# states
# ----------------------------------------------------------------------------


def thermal_populations(mean_n: float, dim: int) -> np.ndarray:
    if mean_n < 0:
        raise DomainError("mean occupation must be >= 0")
    if mean_n == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    q = mean_n / (mean_n + 1)
    p = q ** np.arange(dim) / (mean_n + 1)
    return p / p.sum()


@dataclass(frozen=True)
class QuantumState:
    rho: np.ndarray
    space: Space

    def __post_init__(self):
        if self.rho.shape != (self.space.dim, self.space.dim):
            raise DomainError("density matrix shape does not match the space")

    @classmethod
    def product(cls, space: Space, atom_rho: np.ndarray, mech_rho: np.ndarray) -> "QuantumState":
        return cls(np.kron(atom_rho, mech_rho).astype(complex), space)

    @classmethod
    def from_levels(cls, space: Space, atom_level: int = 0, mech_populations=None,
                    mech_level: Optional[int] = None) -> "QuantumState":
        """Atom in a number/excitation level, mechanics in a Fock level or diagonal mixture."""
        ra = np.zeros((space.atom_dim, space.atom_dim), complex)
        ra[atom_level, atom_level] = 1.0
        if mech_populations is None:
            mech_populations = np.zeros(space.mech_dim)
            mech_populations[0 if mech_level is None else mech_level] = 1.0
        rm = np.diag(np.asarray(mech_populations, dtype=complex))
        return cls.product(space, ra, rm)

    def expect(self, op: np.ndarray) -> float:
        return float(np.real(np.trace(self.rho @ op)))

    def mech_populations(self) -> np.ndarray:
        r = self.rho.reshape(self.space.atom_dim, self.space.mech_dim,
                             self.space.atom_dim, self.space.mech_dim)
        return np.real(np.einsum("imim->m", r))

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def check(self, tol: float = INVARIANT_TOL) -> dict:
        """Trace, Hermiticity and positivity residuals; raises if any exceeds ``tol``."""
        tr = abs(np.trace(self.rho) - 1.0)
        herm = float(np.max(np.abs(self.rho - self.rho.conj().T)))
        min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))))
        if tr > tol or herm > tol or min_eig < -tol:
            raise FloatingPointError(
                f"density matrix invariant violated: |tr-1|={tr:.2e}, "
                f"hermiticity={herm:.2e}, min eigenvalue={min_eig:.2e}")
        return {"trace_error": float(tr), "hermiticity_error": herm, "min_eigenvalue": min_eig}


# ----------------------------------------------------------------------------
# evolution spec
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Hamiltonian:
    kind: Literal["beam_splitter", "jaynes_cummings", "tavis_cummings"]
    g: float
    detuning: float = 0.0
    n_atoms: int = 1

    @classmethod
    def beam_splitter(cls, g: float, detuning: float = 0.0) -> "Hamiltonian":
        return cls("beam_splitter", g, detuning)

    @classmethod
    def jaynes_cummings(cls, g: float, detuning: float = 0.0) -> "Hamiltonian":
        return cls("jaynes_cummings", g, detuning)

    @classmethod
    def tavis_cummings(cls, g: float, n_atoms: int, detuning: float = 0.0) -> "Hamiltonian":
        return cls("tavis_cummings", g, detuning, n_atoms)

    def compatible(self, space: Space) -> None:
        need = {"beam_splitter": "fock", "jaynes_cummings": "tls", "tavis_cummings": "dicke"}[self.kind]
        if space.atom_kind != need:
            raise DomainError(f"{self.kind} needs a {need!r} atom sector, got {space.atom_kind!r}")
        if self.kind == "tavis_cummings" and space.n_atoms != self.n_atoms:
            raise DomainError("Tavis-Cummings atom number differs from the state space")

    def matrix(self, space: Space) -> np.ndarray:
        """g (A^dag b + A b^dag) + detuning A^dag A with A the atomic lowering operator."""
        self.compatible(space)
        a, b = space.a(), space.b()
        H = self.g * (a.conj().T @ b + a @ b.conj().T)
        if self.detuning:
            H = H + self.detuning * (a.conj().T @ a if self.kind != "tavis_cummings"
                                     else space.atom_number())
        return H


@dataclass(frozen=True)
class Dissipator:
    rate: float
    channel: Literal["mech_decay", "atom_dephase", "atom_decay"]
    n_th: float = 0.0

    def __post_init__(self):
        if self.rate < 0 or self.n_th < 0:
            raise DomainError("dissipation rate and n_th must be >= 0")

    def operators(self, space: Space) -> list[np.ndarray]:
        if self.rate == 0:
            return []
        if self.channel == "mech_decay":
            b = space.b()
            ops = [math.sqrt(self.rate * (self.n_th + 1)) * b]
            if self.n_th > 0:
                ops.append(math.sqrt(self.rate * self.n_th) * b.conj().T)
            return ops
        if self.channel == "atom_decay":
            return [math.sqrt(self.rate) * space.a()]
        # coherence between adjacent atomic levels decays at ``rate``
        return [math.sqrt(2 * self.rate) * space.atom_number()]

    @property
    def effective_rate(self) -> float:
        return self.rate * (2 * self.n_th + 1) if self.channel == "mech_decay" else self.rate


@dataclass(frozen=True)
class EvolutionSpec:
    hamiltonian: Hamiltonian
    duration: float
    step: Optional[float] = None
    dissipators: tuple[Dissipator, ...] = ()

    def __post_init__(self):
        if not self.duration > 0:
            raise DomainError("duration must be positive")
        if self.step is not None and self.step > self.max_step * (1 + 1e-12):
            raise DomainError(
                f"step {self.step:g} s exceeds 0.01 / max(rates, g, detuning) = {self.max_step:g} s")

    @property
    def max_step(self) -> float:
        scale = max([abs(self.hamiltonian.g), abs(self.hamiltonian.detuning)]
                    + [d.rate for d in self.dissipators] + [1e-300])
        return 0.01 / scale

    def steps_and_dt(self, space: Space) -> tuple[int, float]:
        dt = self.step
        if dt is None:
            # RK4 positivity error grows as (dt ||H||)^4; 0.01 keeps it near 1e-10
            h_norm = float(np.linalg.norm(self.hamiltonian.matrix(space), 2))
            scale = max([h_norm] + [d.effective_rate for d in self.dissipators] + [1e-300])
            dt = min(self.max_step, 0.01 / scale)
        n = max(1, int(math.ceil(self.duration / dt - 1e-9)))
        return n, self.duration / n


@dataclass(frozen=True)
class QuantumTrajectory:
    times: np.ndarray
    n_atom: np.ndarray
    n_mech: np.ndarray
    trace: np.ndarray
    purity: np.ndarray
    min_eigenvalue: np.ndarray
    final: QuantumState
    states: tuple = field(default=())

    @property
    def excitation(self) -> np.ndarray:
        return self.n_atom + self.n_mech

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_s", "n_atom", "n_mech", "trace", "purity", "min_eigenvalue"])
        for row in zip(self.times, self.n_atom, self.n_mech, self.trace, self.purity, self.min_eigenvalue):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def liouvillian(H: np.ndarray, Ls: Sequence[np.ndarray]) -> sparse.csr_matrix:
    """Sparse generator acting on the row-major flattening of rho.

    Uses vec(A rho B) = (A kron B^T) vec(rho) and the non-Hermitian
    H_eff = H - i/2 sum L^dag L, so that
    d rho/dt = -i (H_eff rho - rho H_eff^dag) + sum L rho L^dag.
    """
    n = H.shape[0]
    eye = sparse.identity(n, dtype=complex, format="csr")
    Heff = H - 0.5j * sum((L.conj().T @ L for L in Ls), np.zeros_like(H))
    Hs = sparse.csr_matrix(Heff)
    gen = -1j * (sparse.kron(Hs, eye) - sparse.kron(eye, Hs.conj()))
    for L in Ls:
        Lsp = sparse.csr_matrix(L)
        gen = gen + sparse.kron(Lsp, Lsp.conj())
    return sparse.csr_matrix(gen)


def evolve_quantum(
    state: QuantumState,
    spec: EvolutionSpec,
    store_every: Optional[int] = None,
    keep_states: bool = False,
    check_cutoff: bool = True,
) -> QuantumTrajectory:
    """Integrate the master equation with fixed-step RK4.

    Invariants (trace, Hermiticity, positivity) are checked at every stored
    step.  If the top two mechanical Fock levels collect more than 1e-6 of
    the population the run aborts with :class:`CutoffError`.
    """
    space = state.space
    state.check()
    H = spec.hamiltonian.matrix(space)
    Ls = [L for d in spec.dissipators for L in d.operators(space)]
    gen = liouvillian(H, Ls)
    n_steps, dt = spec.steps_and_dt(space)
    every = store_every or max(1, n_steps // 400)
    na_op, nm_op = space.atom_number(), space.mech_number()

    dim = space.dim
    v = state.rho.reshape(-1).copy()
    times, na, nm, tr, pur, mins, kept = [], [], [], [], [], [], []

    def record(k, rho):
        st = QuantumState(rho, space)
        inv = st.check()
        pops = st.mech_populations()
        if check_cutoff and pops[-2:].sum() > CUTOFF_POPULATION_LIMIT:
            mean = float(np.dot(np.arange(space.mech_dim), pops))
            need = max(required_cutoff(mean), space.mech_dim + 2)
            raise CutoffError(
                f"mechanical cutoff {space.mech_dim} too small at t={k * dt:.3g} s "
                f"(top-level population {pops[-2:].sum():.2e}); use at least {need}", need)
        times.append(k * dt)
        na.append(st.expect(na_op))
        nm.append(st.expect(nm_op))
        tr.append(float(np.real(np.trace(rho))))
        pur.append(st.purity())
        mins.append(inv["min_eigenvalue"])
        if keep_states:
            kept.append(rho.copy())

    record(0, v.reshape(dim, dim))
    half = 0.5 * dt
    for k in range(1, n_steps + 1):
        k1 = gen @ v
        k2 = gen @ (v + half * k1)
        k3 = gen @ (v + half * k2)
        k4 = gen @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % every == 0 or k == n_steps:
            record(k, v.reshape(dim, dim))
    rho = v.reshape(dim, dim)
    return QuantumTrajectory(
        times=np.array(times), n_atom=np.array(na), n_mech=np.array(nm), trace=np.array(tr),
        purity=np.array(pur), min_eigenvalue=np.array(mins), final=QuantumState(rho, space),
        states=tuple(kept),
    )


# ----------------------------------------------------------------------------
# analysis helpers
# ----------------------------------------------------------------------------


def fidelity_pure(state: QuantumState, psi: np.ndarray) -> float:
    psi = np.asarray(psi, complex)
    return float(np.real(psi.conj() @ state.rho @ psi))


def basis_vector(space: Space, atom_level: int, mech_level: int) -> np.ndarray:
    v = np.zeros(space.dim, complex)
    v[atom_level * space.mech_dim + mech_level] = 1.0
    return v


def rabi_frequency_from_population(times: np.ndarray, p_initial: np.ndarray) -> float:
    """Omega from p(t) = cos^2(Omega t), using samples in the first quarter period."""
    p = np.clip(p_initial, 0.0, 1.0)
    mask = (times > 0) & (p > 0.05) & (p < 0.95)
    if not np.any(mask):
        raise ValueError("no samples inside the first swap")
    first = np.argmax(p < 0.05) if np.any(p < 0.05) else len(p)
    mask &= np.arange(len(p)) < first
    return float(np.mean(np.arccos(np.sqrt(p[mask])) / times[mask]))


def exact_evolution(state: QuantumState, H: np.ndarray, t: float) -> QuantumState:
    """Unitary reference evolution by matrix exponentiation."""
    U = expm(-1j * H * t)
    return QuantumState(U @ state.rho @ U.conj().T, state.space)


# ----------------------------------------------------------------------------
# protocols
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SwapResult:
    n_before: float
    n_after: float
    transfer_fidelity: float
    duration: float
    trajectory: QuantumTrajectory


def swap_cool(
    mech_populations: Sequence[float],
    g: float,
    n_atoms: int = 1,
    mech_rate: float = 0.0,
    n_th: float = 0.0,
    atom_dephasing: float = 0.0,
    atom_decay: float = 0.0,
    mech_dim: Optional[int] = None,
) -> SwapResult:
    """Swap mechanical excitations into atoms prepared in |g>^N.

    Runs for t = pi / (2 g sqrt(N)).  One atom uses the Jaynes-Cummings
    model, several atoms the Tavis-Cummings model in the symmetric sector.
    ``transfer_fidelity`` is the fraction of the initial mechanical quanta
    found in the atoms at the end.
    """
    if g <= 0 or n_atoms < 1:
        raise DomainError("need g > 0 and N >= 1")
    pops = np.asarray(mech_populations, dtype=float)
    dim = mech_dim or max(len(pops), auto_cutoff(n_th))
    p = np.zeros(dim)
    p[: len(pops)] = pops
    if abs(p.sum() - 1) > 1e-12:
        raise DomainError("mechanical populations must sum to 1")
    if n_atoms == 1:
        space, ham = Space.tls(dim), Hamiltonian.jaynes_cummings(g)
    else:
        space, ham = Space.dicke(n_atoms, dim), Hamiltonian.tavis_cummings(g, n_atoms)
    state = QuantumState.from_levels(space, 0, mech_populations=p)
    t = math.pi / (2 * g * math.sqrt(n_atoms))
    diss = tuple(d for d in (
        Dissipator(mech_rate, "mech_decay", n_th),
        Dissipator(atom_dephasing, "atom_dephase"),
        Dissipator(atom_decay, "atom_decay"),
    ) if d.rate > 0)
    traj = evolve_quantum(state, EvolutionSpec(ham, t, dissipators=diss))
    n0 = float(np.dot(np.arange(dim), p))
    n1 = float(traj.n_mech[-1])
    fid = float(traj.n_atom[-1] / n0) if n0 > 0 else 1.0
    return SwapResult(n0, n1, fid, t, traj)


@dataclass(frozen=True)
class CoolingCrossCheck:
    fitted_rate: float
    formula_rate: float
    relative_error: float
    steady_state: float
    trajectory: QuantumTrajectory


def sympathetic_cooling_crosscheck(
    g0: float,
    n_atoms: int,
    atom_cooling_rate: float,
    mech_rate: float,
    n_th: float,
    reflectivity: float = 1.0,
    initial_mech_level: int = 3,
    duration: Optional[float] = None,
    atom_dim: int = 4,
    mech_dim: int = 20,
) -> CoolingCrossCheck:
    """Two damped bosonic modes versus Gamma_m = gamma_m + 4 R N g0^2 / gamma_cool.

    The atoms feel the collective coupling g_N while the membrane feels
    R g_N.  Only the product of the two enters the cooling rate after the
    fast atomic mode is eliminated, so the simulation uses the Hermitian
    exchange rate sqrt(R) g_N.  ``mech_rate`` is the energy damping rate of
    the membrane; the fitted quantity is the decay rate of <b^dag b>.
    """
    if not atom_cooling_rate > 0:
        raise DomainError("atomic cooling rate must be positive")
    if n_atoms < 0 or g0 < 0:
        raise DomainError("need g0 >= 0 and N >= 0")
    g_N = math.sqrt(n_atoms) * g0
    if not g_N < atom_cooling_rate / 4:
        raise DomainError(
            f"weak-coupling regime required: g_N = {g_N:g} must stay below "
            f"gamma_cool / 4 = {atom_cooling_rate / 4:g} for the rate formula to apply")
    if not 0 <= reflectivity <= 1:
        raise DomainError("reflectivity must lie in [0, 1]")
    g_eff = math.sqrt(reflectivity) * g_N
    formula = mech_rate + 4 * reflectivity * g_N**2 / atom_cooling_rate
    T = duration or 4.0 / formula
    space = Space.fock(atom_dim, mech_dim)
    state = QuantumState.from_levels(space, 0, mech_level=initial_mech_level)
    spec = EvolutionSpec(
        Hamiltonian.beam_splitter(g_eff), T,
        dissipators=(Dissipator(atom_cooling_rate, "atom_decay"),
                     Dissipator(mech_rate, "mech_decay", n_th)),
    )
    traj = evolve_quantum(state, spec, store_every=None)
    t, n = traj.times, traj.n_mech
    keep = t > 10.0 / atom_cooling_rate

    def model(tt, A, G, C):
        return A * np.exp(-G * tt) + C

    popt, _ = curve_fit(model, t[keep], n[keep], p0=[n[0], formula, n[-1]], maxfev=20000)
    fitted = float(popt[1])
    return CoolingCrossCheck(fitted, formula, abs(fitted - formula) / formula, float(popt[2]), traj)
