"""Point estimate and influence-function summary of an estimator."""

import dataclasses

import numpy as np


@dataclasses.dataclass(frozen=True)
class EstimatorReport:
    """Summary of an asymptotically linear estimator on one data set.

    Parameters
    ----------
    psi_hat : float
        Point estimate `T(eta_n, P_n)`

    sigma_hat : float
        Influence-function based standard deviation, i.e. the square
        root of `P_n phi_n^2`

    center_at_sampling_dist : float
        Value of `T(eta_n, P-hat_n)`, which plays the role of the truth
        in the bootstrap world

    if_values : np.ndarray
        Influence function values `phi_n(X_i)`

    bandwidth : float or None
        Bandwidth of the density nuisance, if any

    bandwidth_fell_back : bool
        Set if the bandwidth rule fell back to Silverman's rule
    """

    psi_hat: float
    sigma_hat: float
    center_at_sampling_dist: float
    if_values: np.ndarray
    bandwidth: float = None
    bandwidth_fell_back: bool = False

    @property
    def n(self):
        """Return the number of observations."""
        return len(self.if_values)

    @property
    def centering_bias(self):
        """Return `T(eta_n, P-hat_n) - T(eta_n, P_n)`.

        This vanishes for the empirical bootstrap. For smooth bootstraps
        it is the bias that shifts Efron's percentile interval.
        """
        return self.center_at_sampling_dist - self.psi_hat
