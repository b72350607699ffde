"""
Fine-structure share of the binding energy
==========================================

Relative size of the relativistic correction for j = 1/2 across n.
"""
import numpy as np

from relwave.spectra import hydrogen_delta_series, hydrogen_levels_j

n = np.arange(1, 301)
lev = hydrogen_levels_j(n, 0.5)
rd = np.asarray(lev.delta_value) / np.asarray(lev.E_rel)
series = hydrogen_delta_series(n, 0.5)

for k in (1, 2, 3, 5, 10, 40, 100, 300):
    i = k - 1
    print(f"n={k:>3}  delta={lev.delta_value[i]: .6e}  alpha^4 term={series[i]: .6e}  delta/E={rd[i]:.4e}")
print("largest at n =", int(n[np.argmax(rd)]))
