from .groebner import DEFAULT_STEP_BUDGET, StepBudget, step_budget
from .ideal import (
    Ideal,
    eliminate,
    exact_divide,
    groebner_basis,
    ideal_quotient,
    is_groebner,
    kernel_of_ring_map,
    normal_form,
    radical_membership,
    saturation,
    subring_membership,
    unit_ideal,
    zero_ideal,
)
from .orders import GREVLEX, LEX, MonomialOrder, block
from .polynomial import Polynomial, PolyRing

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "GREVLEX",
    "LEX",
    "Ideal",
    "MonomialOrder",
    "PolyRing",
    "Polynomial",
    "StepBudget",
    "block",
    "eliminate",
    "exact_divide",
    "groebner_basis",
    "ideal_quotient",
    "is_groebner",
    "kernel_of_ring_map",
    "normal_form",
    "radical_membership",
    "saturation",
    "step_budget",
    "subring_membership",
    "unit_ideal",
    "zero_ideal",
]
