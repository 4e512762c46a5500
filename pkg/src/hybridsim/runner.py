"""Scenario execution: scheme evaluation, optional dynamics/GPE runs, sweeps and reports."""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from . import __version__
from .checks import Verdict, evaluate_check
from .config import Scenario, sweep_points
from .physcore import DomainError, rad
from .schemes import evaluate
from .trapscape import SWEEP_COLUMNS, format_rows

UNITS = ("SI units (m, kg, s, J, T, K); keys ending in _hz are ordinary frequencies in Hz, "
         "i.e. angular rates divided by 2 pi")


# ----------------------------------------------------------------------------
# report
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    scenario: str
    sha256: str
    scheme: str
    inputs: Mapping[str, Any]
    quantities: Mapping[str, Any]
    tables: Mapping[str, list[dict]] = field(default_factory=dict)
    verdicts: tuple[Verdict, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def header(self) -> dict:
        return {"tool": "hybridsim", "version": __version__, "scenario": self.scenario,
                "scenario_sha256": self.sha256, "units": UNITS}

    def to_json(self) -> str:
        doc = {
            "header": self.header(),
            "scheme": self.scheme,
            "inputs": self.inputs,
            "quantities": _jsonable(self.quantities),
            "checks": [v.to_row() for v in self.verdicts],
            "tables": {k: _jsonable(v) for k, v in self.tables.items()},
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2) + "\n"

    def csv_files(self, stem: str) -> dict[str, str]:
        head = header_lines(self.header())
        files = {f"{stem}.csv": head + format_rows(
            [{"quantity": k, "value": v} for k, v in self.quantities.items()], ("quantity", "value"))}
        if self.verdicts:
            cols = ("id", "source", "quantity", "target", "computed", "tolerance", "passed", "origin",
                    "detail")
            rows = [{**v.to_row(), "target": _target_text(v.target)} for v in self.verdicts]
            files[f"{stem}.checks.csv"] = head + format_rows(rows, cols)
        for name, rows in self.tables.items():
            cols = columns_of(rows)
            files[f"{stem}.{name}.csv"] = head + format_rows(rows, cols)
        return files


def _target_text(t: Any) -> str:
    return f"{t[0]!r}..{t[1]!r}" if isinstance(t, (list, tuple)) else repr(float(t))


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def header_lines(header: Mapping[str, Any]) -> str:
    return (f"# {header['tool']} {header['version']}\n"
            f"# scenario: {header['scenario']} sha256: {header['scenario_sha256']}\n"
            f"# units: {header['units']}\n")


def columns_of(rows: Sequence[Mapping[str, Any]]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_all(files: Mapping[str, str], directory: Path) -> list[Path]:
    """Write every file only after all contents exist; each write is atomic."""
    out = []
    for name, text in files.items():
        p = directory / name
        write_atomic(p, text)
        out.append(p)
    return out


# ----------------------------------------------------------------------------
# dynamics and GPE blocks
# ----------------------------------------------------------------------------


def run_dynamics(block: Mapping[str, Any]) -> tuple[dict, dict]:
    kind = block["kind"]
    if kind == "swap_cool":
        from .dynamics.quantum import auto_cutoff, swap_cool, thermal_populations

        cutoff = block.get("mech_cutoff")
        if "mech_populations" in block:
            pops = list(block["mech_populations"])
        else:
            n0 = float(block.get("mech_thermal_n", 0.0))
            pops = list(thermal_populations(n0, cutoff or auto_cutoff(n0)))
        r = swap_cool(pops, rad(block["coupling_hz"]), int(block.get("n_atoms", 1)),
                      mech_rate=rad(block.get("mech_rate_hz", 0.0)), n_th=block.get("n_th", 0.0),
                      atom_dephasing=rad(block.get("atom_dephasing_hz", 0.0)),
                      atom_decay=rad(block.get("atom_decay_hz", 0.0)), mech_dim=cutoff)
        q = {"n_mech_before": r.n_before, "n_mech_after": r.n_after,
             "transfer_fidelity": r.transfer_fidelity, "swap_time_s": r.duration}
        return q, {"trajectory": _trajectory_rows(r.trajectory)}
    if kind == "sympathetic_cooling":
        from .dynamics.quantum import sympathetic_cooling_crosscheck

        r = sympathetic_cooling_crosscheck(
            rad(block["g0_hz"]), int(block.get("n_atoms", 1)), rad(block["atom_cooling_rate_hz"]),
            rad(block["mech_rate_hz"]), block.get("n_th", 0.0), block.get("reflectivity", 1.0),
            int(block.get("initial_mech_level", 3)))
        q = {"fitted_rate_hz": r.fitted_rate / (2 * math.pi), "formula_rate_hz": r.formula_rate / (2 * math.pi),
             "rate_relative_error": r.relative_error, "fitted_n_ss": r.steady_state}
        return q, {"trajectory": _trajectory_rows(r.trajectory)}
    from .coupling import single_phonon_coupling
    from .dynamics.classical import (
        displaced_state,
        energy_exchange_frequency,
        integrate_classical,
        oscillation_period,
        resonant_pair,
    )

    w = rad(block["frequency_hz"])
    pair = resonant_pair(block["epsilon"], block["mass_ratio"], w, block.get("distance_m", 1e-6))
    g0 = single_phonon_coupling(pair)
    fixed = bool(block.get("oscillator_fixed", False))
    periods = float(block.get("periods", 40.0))
    if fixed:
        duration = periods * 2 * math.pi / w
    else:
        duration = periods * 2 * math.pi / (2 * abs(g0))
    tr = integrate_classical(pair, displaced_state(pair, block["amplitude_m"]), duration,
                             tol=block.get("tol", 1e-10), oscillator_fixed=fixed,
                             samples=int(min(2e6, 16 * duration * w / (2 * math.pi))))
    q = {"g0_hz": g0 / (2 * math.pi), "energy_drift": tr.energy_drift, "escaped": tr.escaped}
    if fixed:
        q["atom_frequency_hz"] = 1.0 / oscillation_period(tr)
    else:
        W = energy_exchange_frequency(tr, pair)
        q["exchange_frequency_hz"] = W / (2 * math.pi)
        q["exchange_over_2g0"] = W / (2 * g0)
    step = max(1, len(tr.t) // 2000)
    rows = [{"t_s": float(tr.t[i]), "z_a_m": float(tr.z_a[i]), "z_m_m": float(tr.z_m[i]),
             "p_a": float(tr.p_a[i]), "p_m": float(tr.p_m[i])} for i in range(0, len(tr.t), step)]
    return q, {"trajectory": rows}


def _trajectory_rows(traj) -> list[dict]:
    return [{"t_s": float(t), "n_atom": float(a), "n_mech": float(m), "trace": float(tr),
             "purity": float(p)}
            for t, a, m, tr, p in zip(traj.times, traj.n_atom, traj.n_mech, traj.trace, traj.purity)]


def gpe_setup(block: Mapping[str, Any]):
    from .gpe import SurfaceBecSetup
    from .physcore import species
    from .potentials import casimir_polder

    return SurfaceBecSetup(species(block["species"]),
                           casimir_polder(block["c4_j_m4"], block.get("beta", 1.0)),
                           block["n_atoms"], block.get("g1d_j_m", 0.0),
                           block.get("barrier_hbar_omega", 8.0), int(block.get("points", 128)))


def run_gpe(block: Mapping[str, Any]) -> tuple[dict, dict]:
    from .gpe import (
        Drive,
        contrast_curve,
        evolve,
        ground_state,
        loss_spectrum,
        mode_spectroscopy,
        resonance_centre,
    )
    from .physcore import HBAR

    setup = gpe_setup(block)
    kind = block["kind"]
    wa = rad(block["trap_frequency_hz"])
    wp = rad(block.get("drive_frequency_hz", block["trap_frequency_hz"]))
    duration = block.get("duration_s", 10e-3)
    b = block.get("drive_amplitude_m", 0.0)
    if kind == "mode_spectroscopy":
        grid = [rad(f) for f in block["trap_frequency_grid_hz"]]
        sp = mode_spectroscopy(setup, grid, Drive(b, wp), duration,
                               observable=block.get("observable", "excitation"))
        q = {f"peak_{i + 1}_over_drive": r for i, r in enumerate(sp.peak_ratios())}
        return q, {"spectroscopy": [r.to_row() for r in sp.rows]}
    cfg = setup.config(wa, Drive(b, wp))
    gs = ground_state(cfg)
    q = {"mu_c_over_hbar_omega": gs.mu_above_bottom / (HBAR * wa),
         "U0_over_hbar_omega": (gs.barrier_height or math.inf) / (HBAR * wa),
         "bound": gs.bound, "trap_distance_m": _minimum(cfg)}
    tables: dict[str, list[dict]] = {}
    if kind == "ground_state":
        tables["ground_state"] = [{"z_m": float(z), "density_per_m": float(abs(p) ** 2)}
                                  for z, p in zip(gs.z, gs.psi)]
    elif kind == "evolve":
        res = evolve(cfg, duration, gs)
        q.update({"remaining_fraction": res.remaining_fraction, "loss": res.loss})
        tables["trajectory"] = [{"t_s": float(t), "norm_fraction": float(n), "com_m": float(c)}
                                for t, n, c in zip(res.times, res.norm, res.com)]
    elif kind == "contrast_curve":
        rows = contrast_curve(cfg, block.get("amplitude_grid_m", [b]), duration, wp)
        q["max_contrast"] = max(r.contrast for r in rows)
        tables["contrast"] = [_contrast_row(r) for r in rows]
    elif kind == "loss_spectrum":
        grid = [rad(f) for f in block["drive_frequency_grid_hz"]]
        rows = loss_spectrum(cfg, grid, b, rad(block["trap_frequency_hz"]),
                             block.get("quality_factor", 3200.0), duration)
        centre = resonance_centre(rows)
        q["resonance_centre_hz"] = centre / (2 * math.pi)
        tables["loss_spectrum"] = [_contrast_row(r) for r in rows]
    return q, tables


def _minimum(cfg) -> float:
    from .trapscape import analyze

    return analyze(cfg.potential).minimum_position


def _contrast_row(r) -> dict:
    return {"amplitude_m": r.amplitude, "drive_frequency_hz": r.frequency / (2 * math.pi),
            "remaining_fraction": r.remaining, "contrast": r.contrast}


# ----------------------------------------------------------------------------
# run and sweep
# ----------------------------------------------------------------------------


def run_scenario(sc: Scenario) -> Report:
    quantities: dict[str, Any] = {}
    tables: dict[str, list[dict]] = {}
    notes: tuple[str, ...] = ()
    if sc.scheme != "simulation":
        res = evaluate(sc.scheme, sc.params)
        quantities.update(res.flat())
        tables.update({k: list(v) for k, v in res.tables.items()})
        notes = tuple(res.notes)
    if "dynamics" in sc.data:
        q, t = run_dynamics(sc.data["dynamics"])
        quantities.update({f"dynamics.{k}": v for k, v in q.items()})
        tables.update({f"dynamics_{k}": v for k, v in t.items()})
    if "gpe" in sc.data:
        q, t = run_gpe(sc.data["gpe"])
        quantities.update({f"gpe.{k}": v for k, v in q.items()})
        tables.update({f"gpe_{k}": v for k, v in t.items()})
    name = Path(sc.source).name
    verdicts = tuple(evaluate_check(c, quantities, name) for c in sc.checks if not c.get("slow"))
    return Report(name, sc.sha256, sc.scheme, _jsonable(sc.data), quantities, tables, verdicts, notes)


def _point(args) -> dict:
    data, source, sha, axes, values = args
    sc = Scenario(data, source, sha)
    for a, v in zip(axes, values):
        sc = sc.with_value(a, v)
    try:
        if sc.scheme == "simulation":
            q: dict = {}
            if "dynamics" in sc.data:
                q.update({f"dynamics.{k}": v for k, v in run_dynamics(sc.data["dynamics"])[0].items()})
            if "gpe" in sc.data:
                q.update({f"gpe.{k}": v for k, v in run_gpe(sc.data["gpe"])[0].items()})
            return {**dict(zip(axes, values)), **q}
        res = evaluate(sc.scheme, sc.params)
        if res.row and len(axes) == 1:
            return dict(res.row)
        return {**dict(zip(axes, values)), **(dict(res.row) or res.flat())}
    except (DomainError, ArithmeticError, RuntimeError, ValueError) as exc:
        return {**dict(zip(axes, values)), "error": f"{type(exc).__name__}: {exc}"}


@dataclass(frozen=True)
class SweepTable:
    axes: tuple[str, ...]
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    header: Mapping[str, Any]

    @property
    def failed(self) -> int:
        return sum(1 for r in self.rows if r.get("error"))

    def to_csv(self) -> str:
        return header_lines(self.header) + format_rows(self.rows, self.columns)

    def body_csv(self) -> str:
        return format_rows(self.rows, self.columns)

    def to_json(self) -> str:
        doc = {"header": dict(self.header), "axes": list(self.axes), "columns": list(self.columns),
               "rows": [_jsonable({c: r.get(c) for c in self.columns}) for r in self.rows]}
        return json.dumps(doc, indent=2) + "\n"


def sweep_scenario(sc: Scenario, sweeps: Optional[Sequence[Mapping[str, Any]]] = None,
                   jobs: int = 1) -> SweepTable:
    """Evaluate every grid point; failures become flagged rows.

    Rows come back in grid order (last axis fastest) whatever the number of
    worker processes.
    """
    sweeps = list(sweeps if sweeps is not None else sc.sweeps)
    if not sweeps:
        from .config import ScenarioError

        raise ScenarioError("scenario has no sweep block and no axis was given")
    axes, points = sweep_points(sweeps)
    gpe_block = sc.data.get("gpe") or {}
    if axes == ["gpe.drive_amplitude_m"] and gpe_block.get("kind") == "contrast_curve":
        rows = _contrast_sweep(sc, [p[0] for p in points])
    else:
        args = [(dict(sc.data), sc.source, sc.sha256, axes, p) for p in points]
        if jobs > 1 and len(args) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_point, args))
        else:
            rows = [_point(a) for a in args]
    cols = _sweep_columns(sc, rows)
    header = {"tool": "hybridsim", "version": __version__, "scenario": Path(sc.source).name,
              "scenario_sha256": sc.sha256, "units": UNITS}
    return SweepTable(tuple(axes), tuple(cols), tuple(rows), header)


def _contrast_sweep(sc: Scenario, amplitudes: list[float]) -> list[dict]:
    from .gpe import Drive, contrast_curve

    block = sc.data["gpe"]
    setup = gpe_setup(block)
    wp = rad(block.get("drive_frequency_hz", block["trap_frequency_hz"]))
    cfg = setup.config(rad(block["trap_frequency_hz"]), Drive(0.0, wp))
    rows = contrast_curve(cfg, amplitudes, block.get("duration_s", 10e-3), wp)
    return [{"gpe.drive_amplitude_m": r.amplitude, **_contrast_row(r)} for r in rows]


def _sweep_columns(sc: Scenario, rows: list[dict]) -> list[str]:
    cols = columns_of([r for r in rows if not r.get("error")])
    if sc.scheme == "surface_trap" and cols == list(SWEEP_COLUMNS):
        cols = list(SWEEP_COLUMNS)
    extra = [c for c in columns_of(rows) if c not in cols and c != "error"]
    cols += extra
    if any(r.get("error") for r in rows):
        cols.append("error")
    return cols
