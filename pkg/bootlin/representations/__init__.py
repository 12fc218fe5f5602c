"""Result representations shared by estimators, bootstrap, and studies."""

from .report import EstimatorReport
from .replicates import ReplicateSet
from .coverage_table import CoverageTable

__all__ = [
    'EstimatorReport',
    'ReplicateSet',
    'CoverageTable',
]
