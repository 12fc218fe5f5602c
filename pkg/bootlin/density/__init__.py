"""Kernels, kernel density estimates, bandwidths, and targeting."""

from .kernels import Kernel
from .kernels import GAUSSIAN
from .kernels import GAUSSIAN_FOURTH_ORDER
from .kernels import get_kernel

from .bandwidth import BandwidthChoice
from .bandwidth import BandwidthRule
from .bandwidth import Fixed
from .bandwidth import Silverman
from .bandwidth import SheatherJones
from .bandwidth import Undersmoothed
from .bandwidth import parse_bandwidth_rule
from .bandwidth import select_bandwidth
from .bandwidth import sheather_jones
from .bandwidth import silverman

from .kde import DensityEstimate
from .kde import FluctuationStep
from .kde import Sample
from .kde import as_sample
from .kde import fit

from .tmle import tmle_target

__all__ = [
    'Kernel', 'GAUSSIAN', 'GAUSSIAN_FOURTH_ORDER', 'get_kernel',
    'BandwidthChoice', 'BandwidthRule', 'Fixed', 'Silverman',
    'SheatherJones', 'Undersmoothed', 'parse_bandwidth_rule',
    'select_bandwidth', 'sheather_jones', 'silverman',
    'DensityEstimate', 'FluctuationStep', 'Sample', 'as_sample', 'fit',
    'tmle_target',
]
