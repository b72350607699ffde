"""
Peak shifts in a Rydberg autocorrelation
========================================

A radial packet around n = 40.  Far out in time the relativistic peak train
runs ahead of the nonrelativistic one by an amount that grows linearly in t.
"""
import numpy as np

from relwave import HydrogenModel, Theory, gaussian_coefficients, timescales
from relwave.analysis import find_peaks, pair_and_measure
from relwave.units import convert_units
from relwave.wavepacket import autocorrelation_trace, envelope_shift_fraction, make_times, shift_fraction

model = HydrogenModel(j=0.5, l=1)
packet = gaussian_coefficients(40, 0.505, n_min=model.min_n())
ts = timescales(model, 40, Theory.REL)

f_level = shift_fraction(model, 40)
f_env = envelope_shift_fraction(model, 40)
print(f"delta/E at nbar: {f_level:.4e}   (E'_rel - E'_nr)/E'_nr: {f_env:.4e}")

for mult in (10, 100):
    centre = mult * ts.T_sup
    times = make_times(centre, 1.5 * ts.T_cl, 2.5e-4 * ts.T_cl)
    rel = find_peaks(autocorrelation_trace(packet, model, times, Theory.REL), 0.02, ts.T_cl / 8)
    nr = find_peaks(autocorrelation_trace(packet, model, times, Theory.NR), 0.02, ts.T_cl / 8)
    pairs = pair_and_measure(rel, nr, f_level).pairs
    best = max(pairs, key=lambda p: p.height_rel)
    print(f"{mult:>4} T_sup ({convert_units(centre, 'au', 'ns'):.1f} ns): shift {convert_units(best.shift, 'au', 'ps'):.3f} ps, "
          f"level estimate {convert_units(best.predicted_shift, 'au', 'ps'):.3f} ps, "
          f"envelope estimate {convert_units(f_env * best.t_rel, 'au', 'ps'):.3f} ps")
