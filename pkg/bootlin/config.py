"""Configuration files of coverage studies.

Configuration files consist of `key = value` lines. Blank lines and
everything after `#` are ignored, and list-valued keys take
comma-separated values:

    n_grid = 100, 500, 2000
    mc_reps = 300
    nuisances = silverman, sj+tmle

Every key can also be given as an override `KEY=VALUE`, which takes
precedence over the file.
"""

import dataclasses

from .errors import DataFormatError
from .errors import DomainError
from .simulation import STD_NORMAL
from .simulation import GcompDGP
from .simulation import SimConfig


def _str(value):
    return value.strip()


def _list_of(convert):
    def _convert(value):
        items = [item.strip() for item in value.split(',') if item.strip()]
        if not items:
            raise ValueError('empty list')

        return tuple(convert(item) for item in items)

    return _convert


def _dgp(value):
    value = value.strip().lower()
    if value not in (STD_NORMAL, 'gcomp'):
        raise ValueError(f'expected {STD_NORMAL} or gcomp, got {value!r}')

    return value


# Keys and their converters.
KEYS = {
    'n_grid': _list_of(int),
    'mc_reps': int,
    'B': int,
    'level': float,
    'dgp': _dgp,
    'gcomp_slope': float,
    'gcomp_intercept': float,
    'gcomp_outcome_slope': float,
    'gcomp_noise_sd': float,
    'constructions': _list_of(_str),
    'kernel': _str,
    'nuisances': _list_of(_str),
    'schemes': _list_of(_str),
    'policies': _list_of(_str),
    'methods': _list_of(_str),
    'seed': int,
    'threads': int,
    'output': _str,
}

_GCOMP_KEYS = {
    'gcomp_slope': 'slope',
    'gcomp_intercept': 'intercept',
    'gcomp_outcome_slope': 'outcome_slope',
    'gcomp_noise_sd': 'noise_sd',
}

_GCOMP_NUISANCES = ('linear/logistic',)


def _split(line, origin):
    if '=' not in line:
        raise DataFormatError(f'{origin}: expected KEY=VALUE, got {line!r}')

    key, value = line.split('=', 1)
    return key.strip(), value.strip()


def convert(key, value):
    """Convert the textual value of a key.

    Raises
    ------
    DomainError
        If the key is unknown or its value cannot be converted
    """
    if key not in KEYS:
        raise DomainError(f'Unknown configuration key {key!r}; expected one of {sorted(KEYS)}')

    try:
        return KEYS[key](value)
    except ValueError as error:
        raise DomainError(f'Invalid value {value!r} for {key!r}: {error}') from None


def parse(text, origin='<string>'):
    """Parse the text of a configuration file into a dictionary."""
    values = {}

    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue

        key, value = _split(line, f'{origin}:{number}')
        values[key] = convert(key, value)

    return values


def apply_overrides(values, overrides):
    """Apply `KEY=VALUE` overrides to parsed configuration values."""
    values = dict(values)

    for override in overrides:
        key, value = _split(override, 'override')
        values[key] = convert(key, value)

    return values


def build(values):
    """Create a `SimConfig` from parsed configuration values.

    Returns
    -------
    Tuple of the `SimConfig` and the output path, which is `None` if not
    configured.
    """
    values = dict(values)
    output = values.pop('output', None)

    dgp_kind = values.pop('dgp', STD_NORMAL)
    dgp_values = {
        _GCOMP_KEYS[key]: values.pop(key) for key in list(values) if key in _GCOMP_KEYS
    }

    if dgp_kind == 'gcomp':
        values['dgp'] = GcompDGP(**dgp_values)
        values.setdefault('nuisances', _GCOMP_NUISANCES)
    else:
        values['dgp'] = STD_NORMAL

    known = {field.name for field in dataclasses.fields(SimConfig)}
    assert set(values) <= known, set(values) - known

    return SimConfig(**values), output


def load(path, overrides=()):
    """Read a configuration file and apply overrides.

    Parameters
    ----------
    path:
        Path of the configuration file, or `None` for the defaults

    overrides:
        Sequence of `KEY=VALUE` strings

    Returns
    -------
    Tuple of the `SimConfig` and the output path.
    """
    values = {}
    if path is not None:
        with open(path) as f:
            values = parse(f.read(), origin=str(path))

    return build(apply_overrides(values, overrides))
