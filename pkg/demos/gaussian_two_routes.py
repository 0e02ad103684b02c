"""A gaussian barrier solved twice: directly, and relative to a square barrier.

The (a, b) amplitudes obey |a|^2 - |b|^2 = 1 all along the trajectory, and the
composed coefficients reproduce the direct solution.
"""
import numpy as np

import scatterbounds as sb
from scatterbounds.phases import nett_phase_residual, phase_trajectory, theta_mismatch

spec = sb.gaussian(1.0, 1.0)
E = 1.1
comp = sb.square_barrier_comparison(0.6, 2.0, E)

direct = sb.solve_direct(spec, E)
final, traj = sb.solve_ab_system(spec, comp, E)
composed = sb.compose_bogoliubov(comp, final)

print(f"T direct   = {direct.T:.12f}")
print(f"T composed = {composed.T:.12f}")
print(f"T0 (square comparison) = {comp.T0:.6f}")
print(f"max flux deviation along {len(traj)} nodes: {traj.flux_deviation():.2e}")

ph = phase_trajectory(traj, comp)
print(f"Theta vs running integral: {theta_mismatch(ph, comp, spec):.2e}")
print(f"nett-phase residual:       {nett_phase_residual(ph, comp, spec):.2e}")
print(f"  with 1/sinh(2 Theta):    {nett_phase_residual(ph, comp, spec, cos_factor='csch'):.2e}")

i = np.argmax(ph.theta)
print(f"largest Theta = {ph.theta[i]:.4f} at x = {ph.x[i]:.3f}; "
      f"final Theta = {ph.theta[-1]:.4f}")

tb = sb.theta_bound(spec, comp, E)
rep = sb.bogoliubov_bounds(tb, comp)
print(f"theta_bound = {tb:.4f}: {rep.T_lower:.4f} <= T <= "
      f"{rep.T_upper if rep.upper_valid else 1.0:.4f}")
