"""Joint spectra of commuting operator tuples: finite-dimensional exact
engine, closed-form structured models on l2, and checks of the tensor and
multiplication product formulas."""
from .chains import (KIND_NAMES, SPECTRUM_KINDS, ChainTrace, PointClassification, chain_traces, classify_point,
                     mk_codim, nk_dim, spectral_flags)
from .errors import (DeflationError, InternalError, JSpecError, ModeMismatchError, NonCommutingError, ShapeError,
                     SpecError)
from .formulas import MULT, TENSOR
from .koszul import build_koszul, homology_dims, kunneth, tensor_total_complex
from .linalg import EXACT, FLOAT, QI, ComplexMatrix, RankConfig, rank
from .operators import (BACKWARD, FORWARD, INFINITE, Atom, DiagonalTupleSpec, FiniteTuple, ShiftSpec,
                        StructuredTuple)
from .regions import Circle, ClosedDisk, ConvergentSequence, FinitePoints, Product, Region, Union
from .spectra_fd import FiniteSpectrum, PolynomialMap, candidate_points, full_spectrum, polynomial_image
from .structured import structured_spectrum, structured_verdict, truncation_verdict
from .tensor import mult_tuple, tensor_tuple, vec
from .verify import VerificationReport, VerifyConfig, run_check, run_check_on_input

__all__ = [
    "KIND_NAMES", "SPECTRUM_KINDS", "ChainTrace", "PointClassification", "chain_traces", "classify_point",
    "mk_codim", "nk_dim", "spectral_flags",
    "DeflationError", "InternalError", "JSpecError", "ModeMismatchError", "NonCommutingError", "ShapeError",
    "SpecError",
    "MULT", "TENSOR",
    "build_koszul", "homology_dims", "kunneth", "tensor_total_complex",
    "EXACT", "FLOAT", "QI", "ComplexMatrix", "RankConfig", "rank",
    "BACKWARD", "FORWARD", "INFINITE", "Atom", "DiagonalTupleSpec", "FiniteTuple", "ShiftSpec", "StructuredTuple",
    "Circle", "ClosedDisk", "ConvergentSequence", "FinitePoints", "Product", "Region", "Union",
    "FiniteSpectrum", "PolynomialMap", "candidate_points", "full_spectrum", "polynomial_image",
    "structured_spectrum", "structured_verdict", "truncation_verdict",
    "mult_tuple", "tensor_tuple", "vec",
    "VerificationReport", "VerifyConfig", "run_check", "run_check_on_input",
]
