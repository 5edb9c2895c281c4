"""Exact Hilbert Eisenstein series data and Eisenstein congruence primes
over totally real fields (degree 1 and 2)."""

from .characters import (RayClassCharacter, RayClassGroup, characters_of,
                         conductor, evaluate, gauss_sum, numerical_character,
                         ray_class_group, trivial_character)
from .congruence import (CongruenceReport, ResidueMapAboveL,
                         newform_criterion, residue_maps_above,
                         search_congruence_primes, verify_congruence)
from .cyclotomic import CyclotomicNumber
from .eigenforms import EigenformData, parse_eigenform_file
from .eisenstein import (CoefficientTable, EisensteinSeries, StabilizedSeries,
                         constant_term_at_cusp, eis_coefficient,
                         eis_constant_term_infty, hecke_apply, level_raise,
                         stabilize)
from .fields import (CapabilityError, ClassData, CuspDatum, FieldElement,
                     FieldError, FieldOrder, IdealHNF, ResourceError,
                     class_groups, conjugate_signs, construct_cusp_matrix,
                     element_arith, enumerate_integral_ideals, factor_ideal,
                     ideal_arith, primes_above, totally_positive_generator)
from .lvalues import LValue, hecke_l_value

__version__ = "0.1.0"
