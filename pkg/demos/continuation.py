"""H_A far outside its series domain, where the physical problem needs it.

For ξ ≤ 0 the function has two independent routes: the η-expansion over
Gauss functions, and an Euler integral over one variable.  They agree
until the η-expansion starts to cancel; then it refuses.

    python3 demos/continuation.py
"""
from hyperfun import ConvergenceError, HaParams
from hyperfun.confluent import EvalPoint
from hyperfun.continuation import ha_eta_expansion, ha_euler_integral
from hyperfun.helmholtz import evaluate_ha, select_route

P = HaParams(0.45, (0.3,), (0.8,))
for xi in (-0.5, -5.0, -50.0, -500.0):
    pt = EvalPoint((xi,), (0.2,))
    integral = ha_euler_integral(P, pt)
    try:
        eta = f"{ha_eta_expansion(P, pt):.16f}"
    except ConvergenceError as exc:
        eta = f"refused ({str(exc).split(';')[0]})"
    print(f"ξ={xi:7.1f}  auto[{select_route(pt.xi, P)}]={evaluate_ha(P, pt):.16f}"
          f"  integral={integral:.16f}  η-expansion={eta}")
