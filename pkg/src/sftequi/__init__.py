"""Subshifts of finite type, the Parry measure, and effective
equidistribution of periodic-orbit measures."""
from .core import (LocallyConstantFunction, PeriodicPoint, TransitionMatrix, Word,
                   evaluate, has_all_self_loops, is_irreducible, is_primitive,
                   lipschitz_seminorm, shift, sup_norm, theta_distance, theta_norm)
from .errors import *  # noqa: F401,F403
from .measures import (FiniteInvariantMeasure, averaging_gap_check, conditional_entropy,
                       cylinder_prob, integrate_measure, kl_average_over_atoms,
                       partition_entropy, phi_p, random_invariant_measure,
                       total_variation_l1, uniform_measure)
from .orbits import (OrbitSet, count_fix, count_primitive, enumerate_fix,
                     enumerate_primitive, orbit_closure, random_invariant_subset)
from .parry import (ParryMeasure, PerronData, compute_perron, conditional_first_symbol,
                    cylinder_measure, entropy, information_function, integrate,
                    markov_entropy)
from .transfer import TransferOperator, apply, estimate_gap, iterate

__version__ = "0.1.0"
