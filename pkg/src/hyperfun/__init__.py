"""Confluent hypergeometric functions of many variables and fundamental
solutions of the singular Helmholtz equation."""
from .confluent import ha_eval, ha_solution_family
from .decomposition import fa_decomposed, fa_recursive, ha_decomposed
from .errors import ConvergenceError, DomainError, HyperfunError, PoleError
from .helmholtz import PointPair, SingularConfig, q_k, q_k_multi
from .multiseries import ErdelyiParams, HaParams, erdelyi_h, lauricella_fa
from .scalar import DEFAULT_TRUNCATION, Truncation, gamma, hyp2f1, pochhammer

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "HyperfunError", "PoleError",
    "Truncation", "DEFAULT_TRUNCATION", "gamma", "pochhammer", "hyp2f1",
    "HaParams", "ErdelyiParams", "lauricella_fa", "erdelyi_h",
    "ha_eval", "ha_solution_family",
    "fa_decomposed", "fa_recursive", "ha_decomposed",
    "SingularConfig", "PointPair", "q_k", "q_k_multi",
]
