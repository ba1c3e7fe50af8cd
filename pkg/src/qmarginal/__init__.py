"""Spectral compatibility constraints for quantum marginals and
one-particle N-representability.

Library layout:

- ``tensor``: dense multipartite states, marginals, Schmidt, purification,
  Haar sampling
- ``spectra``: majorization, Young diagrams, Gale-Ryser, particle-hole
- ``fermion``: occupation-number basis, 1- and 2-particle RDMs, energy
- ``catalog``: the printed inequality families and uniform checks
- ``schubert``: divided differences, Schubert polynomials, structure
  coefficients, inequality generation
- ``chambers``: exact rational cubicle arrangements, extremal edges,
  convex hulls, redundancy filtering
- ``plethysm``: symmetric-power decompositions and the inner approximation
- ``harness``: seeded Monte-Carlo campaigns and witness search
- ``cli``: the ``qmarginal`` command
"""

from .catalog import (
    CheckReport,
    InequalityRecord,
    SpectraBundle,
    applicable_families,
    check_chsh,
    check_equivalence,
    check_family,
    family_ids,
)
from .fermion import (
    FermionState,
    energy_from_two_rdm,
    fermion_basis,
    haar_fermion,
    one_rdm,
    one_rdm_mixed,
    slater,
    two_rdm,
)
from .spectra import (
    Spectrum,
    YoungDiagram,
    gale_ryser,
    majorizes,
    particle_hole,
    renormalize,
    spectrum,
    transpose,
)
from .systems import SystemDescriptor, parse_system
from .tensor import (
    DensityMatrix,
    PureState,
    gram_of_slices,
    haar_pure,
    partial_trace,
    pure_marginal,
    purify,
    random_mixed_with_spectrum,
    schmidt,
    spectrum_of,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "DensityMatrix",
    "FermionState",
    "InequalityRecord",
    "PureState",
    "SpectraBundle",
    "Spectrum",
    "SystemDescriptor",
    "YoungDiagram",
    "applicable_families",
    "check_chsh",
    "check_equivalence",
    "check_family",
    "energy_from_two_rdm",
    "family_ids",
    "fermion_basis",
    "gale_ryser",
    "gram_of_slices",
    "haar_fermion",
    "haar_pure",
    "majorizes",
    "one_rdm",
    "one_rdm_mixed",
    "parse_system",
    "partial_trace",
    "particle_hole",
    "pure_marginal",
    "purify",
    "random_mixed_with_spectrum",
    "renormalize",
    "schmidt",
    "slater",
    "spectrum",
    "spectrum_of",
    "transpose",
    "two_rdm",
]
