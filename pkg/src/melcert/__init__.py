"""melcert: exact first-order averaged integrals for a perturbed circular
center, with certified zero counts and numerical cross-validation."""

from .polynomials import (
    Interval,
    Polynomial,
    cauchy_root_bound,
    count_real_roots,
    count_real_roots_with_multiplicity,
    descartes_bound,
    isolate_roots,
    refine_root,
    squarefree_decomposition,
    squarefree_part,
)
from .intervals import RatInterval, pi_interval, sqrt_rational
from .melnikov import (
    AssemblyError,
    ConfluentNormalForm,
    MelnikovNormalForm,
    PartialFractionRow,
    PerturbCoeffs,
    SystemFamily,
    assemble,
    assemble_confluent,
    assemble_melnikov,
    circle_moment,
    evaluate_normal_form,
    monomial_integral,
    monomial_power_integral,
    partial_fractions,
    power_moment,
    pure_power_integral,
)
from .zeros import (
    CertifiedZero,
    PrescribeError,
    ZeroReport,
    count_zeros,
    eliminate_radicals,
    exact_zero_at,
    prescribe_zeros,
    theorem_bound,
)
from .flow import (
    CycleReport,
    DetectedCycle,
    FlowConfig,
    FlowError,
    QuadratureError,
    displacement,
    find_limit_cycles,
    integrate_to_section,
    numeric_melnikov,
)

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "Polynomial",
    "RatInterval",
    "SystemFamily",
    "PerturbCoeffs",
    "MelnikovNormalForm",
    "ConfluentNormalForm",
    "PartialFractionRow",
    "ZeroReport",
    "CertifiedZero",
    "FlowConfig",
    "CycleReport",
    "DetectedCycle",
    "AssemblyError",
    "PrescribeError",
    "FlowError",
    "QuadratureError",
    "assemble",
    "assemble_confluent",
    "assemble_melnikov",
    "cauchy_root_bound",
    "circle_moment",
    "count_real_roots",
    "count_real_roots_with_multiplicity",
    "count_zeros",
    "descartes_bound",
    "displacement",
    "eliminate_radicals",
    "evaluate_normal_form",
    "exact_zero_at",
    "find_limit_cycles",
    "integrate_to_section",
    "isolate_roots",
    "monomial_integral",
    "monomial_power_integral",
    "numeric_melnikov",
    "partial_fractions",
    "pi_interval",
    "power_moment",
    "prescribe_zeros",
    "pure_power_integral",
    "refine_root",
    "sqrt_rational",
    "squarefree_decomposition",
    "squarefree_part",
    "theorem_bound",
]
