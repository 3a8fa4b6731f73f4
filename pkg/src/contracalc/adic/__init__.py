"""Contramodules over Z_p and k[[z]]."""

from .free import FreeContra, FreeContraElement, combine, level_mult, max_level, monad_mult, monad_unit
from .diagonal import (CounterexampleCertificate, DiagonalPresentation, GeneratorFamily, Membership,
                       PresentedContra, PresentedElement, ReducedModule, contra_sum, contra_tensor,
                       counterexample, counterexample_contramodule, direct_sum, exponent_multiset,
                       hom_contra_adic, image_membership, is_flat_contra, is_projective_contra,
                       is_separated, limit_surjectivity, membership, nakayama_check, reduce_element,
                       reduction, snf_exponents)
from .telescope import (FreeCyclic, LinearOperatorModule, StructureReport, TorsionGroup,
                        admits_contra_structure, closed_form_rule, telescope_solve)
