"""Exact computations with biset functors and native Mackey functors of small finite groups."""

from .bisets import AtomicModule, BisetX, build_X, ind_rho_nabla, tensor_character
from .catalog import GroupSpec, catalog_group, elementary_abelian, parse_group_spec
from .characters import (Character, SimplePair, artin_quotient_dim, character_table, codef_krq_dim,
                         conjugacy_classes, induce_character, inner_product, rational_irreducibles,
                         simple_pairs)
from .cyclotomic import Cyclotomic
from .decomposition import (DecompEntry, DecompositionMatrix, E2Report, bound_entry,
                            burnside_multiplicity, cyclic_row, decompose_induced, e2_report,
                            krq_decomposition, n_matrix, pair_labels, simple_group_row)
from .errors import (BisetCalcError, GroupSpecError, GroupTooLarge, InternalFault, InvalidPermutation,
                     NotNormalError)
from .groups import (LIMITS, FiniteGroup, GroupHom, OutGroup, Subgroup, group_from_generators,
                     isomorphisms, out_group, quotient, subgroups)
from .subquotients import IsoClassIndex, Subquotient, iso_class_index, quotients_iso_to, subquotients

__version__ = "0.1.0"
