"""Hopf-triplet trisection invariants of 4-manifolds and Kuperberg invariants of 3-manifolds."""

from .errors import HopfTriError, NotAdmissibleError, ParseError, StructuralError
from .hopf import (
    HopfAlgebra,
    builtin_algebra,
    curve_tensor,
    group_algebra,
    h8,
    iterated_coproduct,
    klein_four,
    load_algebra,
    trace_cotrace,
    validate_hopf,
    variant_algebra,
)
from .invariants import (
    InvariantResult,
    bracket,
    euler_signature_formula,
    invariant,
    kuperberg_invariant,
    stabilizer_bracket,
    table1_expected,
    trisection_invariant,
)
from .pairing import (
    HopfDoublet,
    HopfTriplet,
    Pairing,
    builtin_doublet,
    builtin_triplet,
    cyclic_triplet,
    drinfeld_double,
    from_double_morphism,
    h8_pairing,
    h8_triplet,
    load_doublet,
    load_triplet,
    quasi_triangular_triplet,
    standard_doublet,
    tautological_triplet,
    tuv_residuals,
    tuv_tensors,
    validate_doublet,
    validate_triplet,
)
from .report import ValidationReport
from .tensor import Tensor, TensorNetwork, einsum, evaluate, plan_contraction
from .topology import (
    InvalidDatumError,
    TrisectionDatum,
    builtin_diagram,
    load_datum,
    parse_datum,
    serialize_datum,
    transform_datum,
    validate_datum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
