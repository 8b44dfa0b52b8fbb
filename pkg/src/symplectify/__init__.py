"""Hamiltonian structures for linear (and polynomially perturbed) equations of motion.

Given x'' = B1 x' + B2 x + f(x), or a first-order evolution matrix M, the
package decides whether a constant symplectic form and quadratic Hamiltonian
generate the flow, builds them exactly over the rationals, derives the
canonical-form Hamiltonian and a Lagrangian when they exist, and checks the
results numerically.
"""
from .canonical import (CanonicalResult, QuadraticLagrangian, add_gauge, build_canonical,
                        build_lagrangian, canonical_j, canonical_omega, euler_lagrange,
                        lagrangian_equivalent, s1_candidates, semicanonical_pair, solve_s1)
from .criterion import (FrobeniusForm, companion, conjugator, even_char_poly, frobenius,
                        invariant_factors, is_hamiltonian_candidate, minimal_polynomial, similar)
from .dynamics import (PolyField, StabilityReport, Trajectory, check_conservative, integrate_potential,
                       nonlinear_hamiltonian, observable_drift, simulate, stability)
from .errors import *  # noqa: F401,F403
from .exact import (LinearSolution, RatMatrix, Rational, UniPoly, as_rational, char_poly, mat_inverse,
                    mat_mul, nullspace, solve_linear)
from .factorization import (ASPair, HamiltonianStructure, conjugate_pair, factor, factor_companion_block,
                            factor_via_frobenius, phase_variables, structure_from_form, to_structure)
from .multipoly import MultiPoly
from .parsing import ParsedSystem, eval_scalar, parse_eom, render_eom
from .pipeline import (DEMO_EXIT_CODES, DEMOS, ProblemSpec, Report, SimulationConfig, demo_spec, format_report,
                       load_report, report_to_dict, run, write_report_json)
from .reduction import (BlockSystem, EquationsOfMotion, PElement, extract_eom, is_admissible,
                        p_conjugate, same_eom, standardize, standardize_element)

__version__ = "0.1.0"
