"""Single swap cooling of a thermal oscillator by one and by four atoms."""

import math

from hybridsim.dynamics.quantum import required_cutoff, swap_cool, thermal_populations

g = 2 * math.pi * 60.0
pops = thermal_populations(1.0, required_cutoff(1.0))
for n in (1, 4):
    r = swap_cool(pops, g, n)
    print(f"N = {n}: <n> {r.n_before:.3f} -> {r.n_after:.3f} in {r.duration * 1e3:.2f} ms")
