"""Python front end for the dgac Allen-Cahn solver."""

import json

from . import _dgac
from ._dgac import ConfigError, characteristic_constant, gauss_legendre, right_radau_points

__all__ = [
    "ConfigError",
    "characteristic_constant",
    "config_hash",
    "convergence",
    "default_verify_config",
    "discrete_characteristic",
    "gauss_legendre",
    "right_radau_points",
    "solve",
    "verify",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def default_verify_config():
    return json.loads(_dgac.default_verify_config())


def config_hash(config):
    return _dgac.config_hash(_text(config))


def solve(config, out="out"):
    return _dgac.solve(_text(config), str(out))


def verify(config=None, out="out"):
    return _dgac.verify(None if config is None else _text(config), str(out))


def convergence(config, levels=4, refine="both", out="out"):
    return _dgac.convergence(_text(config), levels, refine, str(out))


def discrete_characteristic(k, t_hat):
    """Monomial coefficients c with rho(s) = sum c[m] s**m."""
    return _dgac.discrete_characteristic(k, t_hat)
