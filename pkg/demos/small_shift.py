"""First-order response of a square barrier to a small gaussian bump.

Halving epsilon shrinks the error of delta T by ~4 (first-order estimate, so
an O(eps^2) error) and the error of |b| by ~8 (distorted Born is O(eps^3)).
"""
import scatterbounds as sb
from scatterbounds.perturbation import exact_shift, exact_transmission

E = 2.0
comp = sb.square_barrier_comparison(1.0, 1.0, E)
bump = sb.gaussian(1.0, 0.3)

prev = None
print(f"{'eps':>7} {'dT est':>12} {'dT exact':>12} {'bound':>10} {'|b| err':>10}")
for eps in (0.04, 0.02, 0.01, 0.005):
    est = sb.perturbation_estimates(comp, bump, eps)
    dT = exact_transmission(comp, bump, eps) - comp.T0
    b_err = abs(abs(est.b_tilde_est) - abs(exact_shift(comp, bump, eps).b_inf))
    t_err = abs(est.delta_T_est - dT)
    line = f"{eps:7.3f} {est.delta_T_est:12.3e} {dT:12.3e} {est.delta_T_bound:10.3e} {b_err:10.2e}"
    if prev:
        line += f"   ratios dT {prev[0] / t_err:.2f}, |b| {prev[1] / b_err:.2f}"
    print(line)
    prev = (t_err, b_err)
