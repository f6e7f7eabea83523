"""Exact computations with contact and symplectic nilpotent Lie algebras."""
from .exterior import KForm, ce_differential, pullback, wedge
from .filiform import assemble, contact_criterion, model_filiform, normal_form
from .lie import LieAlgebra, LinearMap, abelian, heisenberg
from .structures import (contactize, exists_contact, exists_symplectic, is_contact, is_symplectic,
                         lsa_product, reduce)

__version__ = "0.1.0"

__all__ = [
    "KForm", "LieAlgebra", "LinearMap", "abelian", "assemble", "ce_differential",
    "contact_criterion", "contactize", "exists_contact", "exists_symplectic", "heisenberg",
    "is_contact", "is_symplectic", "lsa_product", "model_filiform", "normal_form", "pullback",
    "reduce", "wedge",
]
