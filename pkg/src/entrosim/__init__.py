"""entrosim: entropy-in-economics simulation and analysis toolkit.

Two programs under one roof:

* macro -- entropy as a macroeconomic production function over
  (capital, worker population, capital stock) time series, with entropic
  elasticity and order/disorder classification per period.
* micro -- cellular-automata micro-economy: elementary 1D automata,
  Schelling segregation on a 2D lattice, the Dragulescu-Yakovenko random
  money-exchange game with its Gibbs stationary distribution, and the
  composite consumer model in a prices x goods configuration space, all
  instrumented with Shannon-entropy traces.

Hot loops run on a compiled Cython core when built, with a pure-Python
fallback selected at import (see ``entrosim.kernels``).
"""

__version__ = "0.1.0"
