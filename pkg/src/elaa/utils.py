"""Small shared helpers."""

import numpy as np


def power_db(x):
    """Power ratio to decibels, 10*log10(x). Single owner of the factor 10."""
    return 10.0 * np.log10(x)


def db_power(x_db):
    """Decibels to power ratio, inverse of :func:`power_db`."""
    return 10.0 ** (np.asarray(x_db) / 10.0)
