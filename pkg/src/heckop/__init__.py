"""Fourier analysis in the rank-one Heckman-Opdam polynomial basis.

Exact construction of the non-symmetric basis E_n^k, closed-form
evaluation, quadrature against |sin x|^{2k} dx, the partial-sum kernel,
and convergence experiments in weighted Lp.
"""

from .errors import (ConvergenceError, DegreeCapError, EvaluationError,
                     IntegrabilityError)
from .exppoly import (ExpPoly, build_E_gram_schmidt, cherednik_apply,
                      eigenvalue, identity_checks, inner_product, precedes,
                      predecessors, weight_fourier_moment)
from .specfun import (NormTable, e_eval, e_eval_real, e_table, envelope,
                      gamma_coeff, gamma_sq, gegenbauer, norm_sq, p_eval,
                      p_eval_real, p_table)
from .quadrature import (QuadRule, RefinePolicy, SingularRule, build_rule,
                         build_singular_rule, integrate, integrate_singular,
                         integrate_singular_symmetric, lp_norm)
from .fourier import (CoeffTable, ExperimentReport, KernelQuery, coefficients,
                      converge_experiment, cot_comparison_integral,
                      counterexample_experiment, counterexample_function,
                      kernel_closed, kernel_direct, partial_sum,
                      partial_sum_kernel)

__version__ = "0.1.0"
