"""Numerical checks for the ground-state energy of a two-component charged Bose gas.

Submodules: scalars (I0, I(a)), meanfield (Dyson's constant A), bogolubov,
lattice, matloc, potentials, fockcheck, and the cli.
"""

from .scalars import I0, i0_closed_form

__all__ = ["I0", "i0_closed_form"]
__version__ = "0.1.0"
