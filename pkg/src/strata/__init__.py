"""Multiplicity-vector strata of monic real polynomials: exact root data,
the adjacency poset, tangent frames and the adjacent-curve harness."""
from .polycore import MonicPolynomial, MultiplicityVector, multiplicity_vector, parse_poly
from .stratlat import Stratum, build_poset, enumerate_mvs, in_closure, validate_mv
from .geomkit import RootConfiguration, StratumPoint, sample_stratum, tangent_frame
from .lemmalab import section_setup, verify_all

__all__ = [
    "MonicPolynomial", "MultiplicityVector", "multiplicity_vector", "parse_poly",
    "Stratum", "build_poset", "enumerate_mvs", "in_closure", "validate_mv",
    "RootConfiguration", "StratumPoint", "sample_stratum", "tangent_frame",
    "section_setup", "verify_all",
]
__version__ = "0.1.0"
