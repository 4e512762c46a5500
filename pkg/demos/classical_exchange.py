"""Classical energy exchange between a displaced atom and a resonant oscillator."""

import math

from hybridsim.coupling import single_phonon_coupling
from hybridsim.dynamics.classical import (
    displaced_state,
    energy_exchange_frequency,
    integrate_classical,
    resonant_pair,
)

w = 2 * math.pi * 1e4
pair = resonant_pair(0.01, 1e-2, w)
g0 = single_phonon_coupling(pair)
T = 2.5 * 2 * math.pi / (2 * g0)
tr = integrate_classical(pair, displaced_state(pair, 1e-9), T, tol=1e-10, samples=int(T * w / math.pi * 8))
print(f"2 g0 / 2pi = {2 * g0 / (2 * math.pi):.3f} Hz")
print(f"exchange frequency / 2pi = {energy_exchange_frequency(tr, pair) / (2 * math.pi):.3f} Hz")
