"""Coverage tables of Monte Carlo studies."""

import numpy as np
import pandas as pd


COLUMNS = [
    'config_id', 'n', 'construction', 'bandwidth', 'scheme', 'policy',
    'method', 'coverage', 'mean_scaled_width', 'reps', 'failures',
]


class CoverageTable:
    """Empirical coverage and scaled width per study cell.

    The table is backed by a `pd.DataFrame` with the columns listed in
    `COLUMNS`; one row corresponds to one configuration, sample size,
    and interval method.
    """

    def __init__(self, data):
        """Create a new coverage table.

        Parameters
        ----------
        data:
            Either a `pd.DataFrame` with the required columns, or
            a sequence of records in the order of `COLUMNS`.
        """
        if isinstance(data, pd.DataFrame):
            self._data = data[COLUMNS].reset_index(drop=True)
        else:
            self._data = pd.DataFrame.from_records(list(data), columns=COLUMNS)

        assert np.all(self._data['coverage'].dropna().between(0.0, 1.0))

    def __len__(self):
        """Return the number of cells."""
        return len(self._data)

    def __repr__(self):
        return self._data.__repr__()

    @property
    def data(self):
        """Return the underlying data frame."""
        return self._data

    def select(self, **criteria):
        """Return the rows matching all given column values."""
        mask = np.ones(len(self._data), dtype=bool)
        for column, value in criteria.items():
            mask &= (self._data[column] == value).to_numpy()

        return self._data[mask]

    def coverage(self, **criteria):
        """Return the coverage of the single cell matching `criteria`."""
        rows = self.select(**criteria)
        assert len(rows) == 1, f'{len(rows)} cells match {criteria}'
        return float(rows['coverage'].iloc[0])

    def to_csv(self, path):
        """Write the table in its CSV format to `path`."""
        self._data.to_csv(
            path, index=False, float_format='%.10g', lineterminator='\n'
        )

    @classmethod
    def read_csv(cls, path):
        """Read a table previously written by `to_csv`."""
        return cls(pd.read_csv(path))
