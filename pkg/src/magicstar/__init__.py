"""Exact construction and verification of the Magic Star algebras e6^(n), e8^(n)."""

from .algebra import Element, MagicStarAlgebra, algebra, bracket, cartan_element, jacobi_scan, jacobiator
from .asymmetry import asymmetry, epsilon, simple_sign_matrix, verify_eps_properties
from .ht_algebra import HTAlgebra, build_vertex, circ, matrix_view, norm3, rank, sharp, trace, trace_form
from .ht_pair import HTPair, complete_idempotent, ht_pair, u_op, v_op
from .lattice import AlgebraSpec, Family, RootSystem, enumerate_roots, inner, make_spec, simple_roots
from .magic_star import Charge, five_grading, partition, three_grading
from .report import Sampler, VerificationReport
from .suites import SUITE_IDS, run, run_suites

__version__ = "0.1.0"
