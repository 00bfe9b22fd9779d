"""Exact and high-precision evaluation of log-weighted double integrals
over the unit square, with verification sweeps for their closed forms."""

from zetaint.errors import ConvergenceError, DomainError, PoleError, ZetaIntError
from zetaint.evaluators import (
    ConjectureSpec,
    EvaluationResult,
    quad_2d_eval,
    reduce_1d_eval,
    series_eval,
    series_eval_conjecture,
)
from zetaint.exact import (
    MonomialSpec,
    ZetaLinearForm,
    corollary_form,
    divisibility_check,
    lcm_upto,
    theorem1a_value,
    theorem1b_form,
)
from zetaint.harness import (
    GridSpec,
    VerificationRecord,
    gamma_limit_study,
    rhs_value,
    verify_conjecture,
    verify_theorem1,
)
from zetaint.precision import (
    PrecisionContext,
    bernoulli,
    eval_form,
    euler_gamma,
    gamma,
    zeta,
    zeta_minus_pole,
)
from zetaint.report import emit_report

__version__ = "0.1.0"

__all__ = [
    "ConjectureSpec", "ConvergenceError", "DomainError", "EvaluationResult", "GridSpec",
    "MonomialSpec", "PoleError", "PrecisionContext", "VerificationRecord", "ZetaIntError",
    "ZetaLinearForm", "bernoulli", "corollary_form", "divisibility_check", "emit_report",
    "eval_form", "euler_gamma", "gamma", "gamma_limit_study", "lcm_upto", "quad_2d_eval",
    "reduce_1d_eval", "rhs_value", "series_eval", "series_eval_conjecture", "theorem1a_value",
    "theorem1b_form", "verify_conjecture", "verify_theorem1", "zeta", "zeta_minus_pole",
]
