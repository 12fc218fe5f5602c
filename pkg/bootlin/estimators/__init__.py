"""Estimators of the average density value and the G-computed conditional mean."""

from .average_density import AverageDensity
from .average_density import Construction
from .average_density import NuisanceSpec
from .average_density import PSI_STANDARD_NORMAL
from .average_density import center_at
from .average_density import estimate
from .average_density import influence_values
from .average_density import parse_construction
from .average_density import parse_nuisance
from .average_density import sigma_if

from .gcomp import CausalSample
from .gcomp import GComputation
from .gcomp import GcompConstruction
from .gcomp import GcompNuisance
from .gcomp import estimate_ee
from .gcomp import estimate_onestep
from .gcomp import fit_nuisance
from .gcomp import influence_values_gcomp

__all__ = [
    'AverageDensity', 'Construction', 'NuisanceSpec', 'PSI_STANDARD_NORMAL',
    'center_at', 'estimate', 'influence_values', 'parse_construction',
    'parse_nuisance', 'sigma_if',
    'CausalSample', 'GComputation', 'GcompConstruction', 'GcompNuisance',
    'estimate_ee', 'estimate_onestep', 'fit_nuisance',
    'influence_values_gcomp',
]
