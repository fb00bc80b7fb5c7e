"""Lauricella F_A summed directly and through its three expansions.

    python3 demos/fa_three_ways.py
"""
import numpy as np

from hyperfun import HaParams, fa_decomposed, fa_recursive, lauricella_fa
from hyperfun.decomposition import fa_decomposed_transformed

P = HaParams(0.7, (0.4, 1.1, 0.6), (1.3, 0.9, 1.7))

rng = np.random.default_rng(0)
print(f"{'x':^26}  {'series':^18}  decomposed  transformed  recursive")
for _ in range(5):
    x = rng.dirichlet(np.ones(4))[:3] * 0.5 * rng.choice([-1, 1], 3)
    ref = lauricella_fa(P, x)
    errs = [abs(f(P, x) / ref - 1) for f in (fa_decomposed, fa_decomposed_transformed, fa_recursive)]
    print(" ".join(f"{v:+.4f}" for v in x) + f"  {ref:18.15f}  "
          + "  ".join(f"{e:10.1e}" for e in errs))

# one variable: F_A is Gauss's 2F1
from hyperfun import hyp2f1
P1 = HaParams(0.7, (0.4,), (1.3,))
print("n = 1:", lauricella_fa(P1, (0.45,)), hyp2f1(0.7, 0.4, 1.3, 0.45))
