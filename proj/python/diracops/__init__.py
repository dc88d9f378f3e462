"""Numerical operator algebra for the free Dirac electron.

Thin python layer over the compiled extension: plane-wave bispinors, the
Foldy-Wouthuysen frame, energy-subspace projected and Newton-Wigner style
operator families, and vortex-beam observables built from them.
"""

from ._diracops import *  # noqa: F401,F403
from ._diracops import __all__  # noqa: F401
