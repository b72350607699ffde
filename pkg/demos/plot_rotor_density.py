"""
Angular density through a revival
=================================

The nonrelativistic density repeats exactly after every revival.  The
relativistic one does not, and the mismatch grows with the number of
revivals already completed.
"""
import math

import numpy as np

from relwave import RotorModel, Theory, gaussian_coefficients
from relwave.numerics import ExtendedReal
from relwave.rotor import density, quadrature_moments, spinor_weights
from relwave.wavepacket import evolve

model = RotorModel()
packet = gaussian_coefficients(1, 0.271, math.pi)
weights = spinor_weights(model, packet.ns)
T_rev = 4 * math.pi * 1e6

for k in (0, 10 ** 6, 10 ** 8, 10 ** 9, int(3.1e16 // T_rev)):
    t = ExtendedReal.of(T_rev) * float(k)
    nr = density(evolve(packet, model, t, Theory.NR), None, 512)
    rel = density(evolve(packet, model, t, Theory.REL), weights, 512)
    m = quadrature_moments(rel)
    print(f"revival {k:>10d}: peak NR {nr.values.max():.3f}  peak REL {rel.values.max():.3f}"
          f"  REL mean {m.mean:.3f}  var {m.variance:.4f}  max|diff| {np.abs(nr.values - rel.values).max():.2e}")
