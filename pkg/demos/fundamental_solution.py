"""Fundamental solutions q_k of the singular Helmholtz-type operator

    Δu + Σ_j (2α_j / x_j) ∂u/∂x_j - λ² u

in R^3 with one singular coordinate: a slice through the source, the
finite-difference residual, and the blow-up constant at the source.

    python3 demos/fundamental_solution.py
"""
import numpy as np

from hyperfun import PointPair, SingularConfig, q_k
from hyperfun.helmholtz import singularity_limit, singularity_probe, singularity_target
from hyperfun.verify import FD_TRUNCATION, helmholtz_residual

cfg = SingularConfig(3, (0.25,), (1.0,))
x0 = (0.6, 0.1, 0.0)

# values along a line parallel to the x_1 axis
print("x1       q_0            q_1")
for x1 in np.linspace(0.1, 1.1, 6):
    x = (x1, 0.3, 0.05)
    print(f"{x1:4.2f} " + " ".join(f"{q_k(cfg, PointPair(x, x0), k):14.8e}" for k in (0, 1)))

# the PDE holds to second order in the step
x = (0.3, 0.25, 0.1)
for k in (0, 1):
    rep = helmholtz_residual(cfg, lambda y: q_k(cfg, PointPair(tuple(y), x0), k, FD_TRUNCATION),
                             x, h=1e-2)
    order = f"{rep.order_estimate:.2f}" if rep.order_resolved else "below rounding noise"
    print(f"k={k}: relative residual {rep.relative:.2e} at h={rep.step:g}, order {order}")

# r^(m-2) ∏ r_j^(2α_j) q_0 near the source
probe = singularity_probe(cfg, x0, (1.0, 1.0, 1.0), [1e-1, 1e-2, 1e-3, 1e-4])
for r, v in probe:
    print(f"r={r:7.0e}  scaled q_0 = {v:.10f}")
print(f"limit with Γ(m/2-1): {singularity_limit(cfg):.10f}")
print(f"limit with Γ(m/2):   {singularity_target(cfg):.10f}  (off by m/2-1 unless m = 4)")
