"""Exact arithmetic for free Cantor algebras, Higman–Thompson groups, clones,
finite group homology and the K₀ fragments around them."""

from .core import (
    Address, Alpha, CantorError, Gen, Homomorphism, Mu, PrefixCode, Signature, Term,
    apply_hom, code_complement, code_refine, code_validate, equal, mu, reduce,
    reduce_outermost,
)
from .parsing import ParseError, format_tableau, format_term, parse
from .thompson import (
    Tableau, apply, block_sum, compose, identity, inverse, make_tableau,
    perfectness_identity, retract_check, swap, whitehead_witness,
)

__version__ = "0.1.0"
