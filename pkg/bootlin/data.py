"""Reading observations from files.

Samples of the average density value are plain text files with one
observation per line. Samples of the G-computed conditional mean are
CSV files with the columns `y`, `a`, and `z`.
"""

import warnings

import numpy as np
import pandas as pd

from .density import Sample
from .errors import DataFormatError
from .errors import DomainError
from .estimators import CausalSample


def read_sample(path):
    """Read a one-dimensional sample from a plain text file.

    Parameters
    ----------
    path:
        Path of the file; lines starting with `#` are ignored

    Returns
    -------
    `Sample` of the observations.

    Raises
    ------
    DataFormatError
        If the file is empty or contains anything but one number per line
    """
    try:
        with warnings.catch_warnings():
            # Empty files are reported as a warning by `np.loadtxt`.
            warnings.simplefilter('ignore', UserWarning)
            points = np.loadtxt(path, dtype=float, comments='#', ndmin=1)
    except ValueError as error:
        raise DataFormatError(f'{path}: {error}') from None

    if points.ndim != 1:
        raise DataFormatError(f'{path}: expected one observation per line')

    if len(points) == 0:
        raise DataFormatError(f'{path}: file contains no observations')

    try:
        return Sample(points)
    except DomainError as error:
        raise DataFormatError(f'{path}: {error}') from None


def read_causal_sample(path):
    """Read a sample with columns `y`, `a`, and `z` from a CSV file.

    Raises
    ------
    DataFormatError
        If the file is empty, lacks a column, or has non-numeric entries
    DegenerateDataError
        If there are no treated units or no controls
    """
    try:
        frame = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise DataFormatError(f'{path}: file contains no observations') from None
    except pd.errors.ParserError as error:
        raise DataFormatError(f'{path}: {error}') from None

    frame.columns = [str(column).strip().lower() for column in frame.columns]
    missing = {'y', 'a', 'z'} - set(frame.columns)

    if missing:
        raise DataFormatError(f'{path}: missing columns {sorted(missing)}')

    if len(frame) == 0:
        raise DataFormatError(f'{path}: file contains no observations')

    try:
        frame = frame[['y', 'a', 'z']].apply(pd.to_numeric, errors='raise')
    except (ValueError, TypeError) as error:
        raise DataFormatError(f'{path}: {error}') from None

    if not np.all(frame['a'].isin((0, 1))):
        raise DataFormatError(f'{path}: treatment indicators must be 0 or 1')

    try:
        return CausalSample.from_frame(frame)
    except DomainError as error:
        raise DataFormatError(f'{path}: {error}') from None
