"""
Relativistic drift of a rotor packet
====================================

A Gaussian packet on a ring of radius 1000 bohr.  Both spectra revive at
the same rate for the first few revivals, then the relativistic phases
slip and the angular mean and variance part ways.
"""
import math

from relwave import RotorModel, Theory, gaussian_coefficients, timescales
from relwave.analysis import relative_difference_series, windowed_max_abs
from relwave.rotor import analytic_moments, spinor_weights
from relwave.wavepacket import evolve, make_times

model = RotorModel(R=1000.0)
packet = gaussian_coefficients(1, 0.271, math.pi)
weights = spinor_weights(model, packet.ns)

###############################################################################
# The relevant clocks.  The critical time is where the level shift has
# accumulated one radian of phase.
for theory in Theory:
    ts = timescales(model, 1, theory)
    print(f"{theory.value:>3}  T_cl={ts.T_cl:.4e}  T_rev={ts.T_rev:.4e}  T_sup={ts.T_sup:.4e}  T_crit={ts.T_critical:.4e}")

###############################################################################
# Windowed maxima of the relative difference of the moments.
half_width, step = 2 * math.pi * 1e6, 2 * math.pi * 1e3
for centre in (2.2e14, 2.1e15, 3.1e16):
    times = make_times(centre, half_width, step)
    nr = analytic_moments(evolve(packet, model, times, Theory.NR), weights, Theory.NR)
    rel = analytic_moments(evolve(packet, model, times, Theory.REL), weights, Theory.REL)
    t = times.to_float()
    dm = windowed_max_abs(relative_difference_series(nr.mean, rel.mean, t), centre, half_width)
    dv = windowed_max_abs(relative_difference_series(nr.variance, rel.variance, t), centre, half_width)
    print(f"t = {centre:.1e} au   max|d mean| = {dm:6.1%}   max|d var| = {dv:6.1%}")
