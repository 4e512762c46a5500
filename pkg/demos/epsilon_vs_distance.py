"""Coupling parameter and barrier height of a re-tuned 10 kHz trap versus surface distance.

Writes epsilon_vs_distance.csv next to this script.
"""

from pathlib import Path

import numpy as np

from hybridsim import checks, trapscape
from hybridsim.physcore import species
from hybridsim.potentials import casimir_polder

cfg = trapscape.SurfaceTrapConfig(species("Rb87"), casimir_polder(checks._perfect_c4(), 1.0),
                                  2 * np.pi * 1e4, retune=True, gravity=False)
rows = trapscape.epsilon_vs_distance(cfg, np.linspace(0.4e-6, 3e-6, 27))
out = Path(__file__).with_suffix(".csv")
out.write_text(trapscape.sweep_csv(rows))
print(f"wrote {out}")
