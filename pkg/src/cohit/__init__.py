"""cohit: the hit problem for the mod-2 polynomial algebra, divided-power
primitives, lambda-algebra homology, and the rank-k algebraic transfer.

Subpackage map:

* ``gf2``      bit-packed linear algebra over F_2
* ``poly``     P_k = F_2[x_1..x_k], Steenrod squares, substitutions
* ``hit``      hit spaces, the quotient QP_k, the degree-halving map
* ``action``   induced matrix-group actions and invariants on QP_k
* ``dual``     divided powers, dualized squares, primitives, coinvariants
* ``lam``      the lambda algebra: normal forms, differential, homology
* ``transfer`` the chain-level transfer and its induced map on homology
* ``tables``   bundled expected dimension tables for the CLI
* ``cli``      command-line interface
"""

from . import config
from .config import CapExceeded, set_degree_cap

__all__ = ["config", "CapExceeded", "set_degree_cap", "__version__"]

__version__ = "0.1.0"
