"""Exact twisted cohomology of invariant complexes of Lie algebras over Q(i)."""

from twisted_hodge.catalog import builtin_model, catalog_keys
from twisted_hodge.cohomology import (
    five_cohomologies,
    frolicher_audit,
    hodge_decomposition_verdict,
    lemma_verdict,
    natural_maps,
    witness_extract,
)
from twisted_hodge.complex import FormBasis, LieComplexSpec, build_basis, parse_and_validate
from twisted_hodge.errors import InputError, TheoremViolation, TwistedHodgeError
from twisted_hodge.field import GaussianRational
from twisted_hodge.twisted import TwistPair, twisted_complex

__version__ = "0.1.0"
