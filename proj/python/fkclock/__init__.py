"""Variational Feynman-Kitaev clock simulation of the transverse-field Ising chain."""

from ._fkclock import *  # noqa: F401,F403
from ._fkclock import __version__  # noqa: F401


def make_config(n_spins=2, n_aux=2, total_time=3.0, coupling=0.25, field=1.0):
    """FkConfig with the default step dt = total_time / 2^(n_aux - 1)."""
    c = FkConfig()  # noqa: F405
    c.tfim = TfimParams(n_spins, coupling, field)  # noqa: F405
    c.clock = ClockSpec(n_aux)  # noqa: F405
    c.dt = default_dt(total_time, n_aux)  # noqa: F405
    return c
