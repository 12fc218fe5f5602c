"""Bootstrap replicates of an estimator."""

import numpy as np

from ..errors import DomainError


class ReplicateSet:
    """Bootstrap replicates `psi*_b` and their standard errors `sigma*_b`.

    Replicates that failed numerically are stored as `NaN` and are
    excluded by `valid()`.
    """

    def __init__(self, psi_star, sigma_star, center):
        """Create a new set of replicates.

        Parameters
        ----------
        psi_star:
            Bootstrap estimates, one per replicate

        sigma_star:
            Influence-function standard deviations, one per replicate

        center : float
            Centering value `T(eta_n, P-hat_n)`
        """
        psi_star = np.array(psi_star, dtype=float)
        sigma_star = np.array(sigma_star, dtype=float)

        if len(psi_star) < 1 or len(psi_star) != len(sigma_star):
            raise DomainError('Replicate arrays must be non-empty and of equal length')

        psi_star.setflags(write=False)
        sigma_star.setflags(write=False)

        self._psi_star = psi_star
        self._sigma_star = sigma_star
        self._center = float(center)

    def __len__(self):
        """Return the number of replicates, including invalid ones."""
        return len(self._psi_star)

    def __repr__(self):
        return f'ReplicateSet(B={self.B}, invalid={self.n_invalid})'

    @property
    def psi_star(self):
        """Return the bootstrap estimates."""
        return self._psi_star

    @property
    def sigma_star(self):
        """Return the bootstrap standard deviations."""
        return self._sigma_star

    @property
    def center(self):
        """Return the centering value."""
        return self._center

    @property
    def B(self):
        """Return the number of replicates."""
        return len(self._psi_star)

    @property
    def is_valid(self):
        """Return a mask of the replicates that did not fail."""
        return np.isfinite(self._psi_star) & np.isfinite(self._sigma_star)

    @property
    def n_invalid(self):
        """Return the number of failed replicates."""
        return int(np.sum(~self.is_valid))

    def valid(self):
        """Return the replicate set restricted to the valid replicates."""
        mask = self.is_valid
        if not np.any(mask):
            raise DomainError('All bootstrap replicates are invalid')

        return ReplicateSet(
            self._psi_star[mask], self._sigma_star[mask], self._center
        )

    def deviations(self):
        """Return the centred replicates `psi*_b - center`."""
        return self._psi_star - self._center

    def shift(self, c):
        """Return the replicates and their center shifted by `c`."""
        return ReplicateSet(self._psi_star + c, self._sigma_star, self._center + c)
