"""Schroedinger and Richardson spectra of -psi'' - lambda sgn(x) psi = E psi
on [-1, 1] with Dirichlet ends, related through one characteristic function."""
from .charfun import (char_at, eigenfunction, inner_products, is_eigenpair, kernel,
                      node_count)
from .errors import *  # noqa: F401,F403
from .identities import (IdentityReport, defect_check, derivative_check,
                         generalized_eigenfunction, herglotz_reference, signature_check)
from .lattice import defective_multiplicity, multiplicity_table, site
from .richardson import (CouplingSet, SheetLabel, SpectralSegment, SpectralType,
                         classify_segments, eigencouplings, oscillation_census, zettl_bound)
from .rootfind import (DegeneratePoint, DoubleRootSpec, Mode, Rectangle,
                       complex_roots_in_rectangle, double_root, real_roots_in_E)
from .schrodinger import (branch_catalog, critical_catalog, eigencurves, levels,
                          monodromy_swaps, trace_real_locus, trace_type_b)

__version__ = "0.1.0"
