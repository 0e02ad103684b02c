"""Transmission through a unit square barrier and how tightly it is bracketed.

With the free particle as comparison only the lower bound is informative
(T0 = 1, so the upper bound is the trivial T <= 1). A weaker barrier of the
same width is a better comparison: it reflects, so both bounds bite.
"""
import numpy as np

import scatterbounds as sb

barrier = sb.square_barrier(1.0, 1.0)
weaker = sb.square_barrier(0.9, 1.0)

print(f"{'E':>5} {'T':>9} | {'free: T_lo':>10} | {'V0=0.9: T_lo':>12} {'T_hi':>8}")
for E in np.linspace(1.2, 6.0, 9):
    T = sb.solve_direct(barrier, E).T
    free = sb.free_comparison(E)
    lo_free = sb.bogoliubov_bounds(sb.theta_bound(barrier, free, E), free).T_lower
    comp = sb.comparison_for(weaker, E)
    rep = sb.bogoliubov_bounds(sb.theta_bound(barrier, comp, E), comp)
    hi = f"{rep.T_upper:8.5f}" if rep.upper_valid else "   (n/a)"
    print(f"{E:5.2f} {T:9.6f} | {lo_free:10.6f} | {rep.T_lower:12.6f} {hi}")

# the free-comparison bound agrees with the closed-form cosh(int|V|/2k) bound
E = 2.0
print("\nalpha bound, general vs closed form:",
      sb.bogoliubov_bounds(sb.theta_bound(barrier, sb.free_comparison(E), E),
                           sb.free_comparison(E)).alpha_upper,
      sb.case1_bound(barrier, E))
