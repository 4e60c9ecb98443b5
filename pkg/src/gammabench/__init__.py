"""gammabench: exact workbench for vertex-Clifford bosonization on multigraphs.

Everything is built on two exact substrates: GF(2) linear algebra for
chains and cochains (``z2core``) and phase-tracked Pauli words over a
qubit register (``opalg``).  The remaining modules assemble fermionic
generators, the vertex-Clifford model and its constraint sectors, gauge
theories with deformed Gauss operators, the edge-register dual, toroidal
solvers and spectral cross-checks on top of those two layers.
"""

__version__ = "0.1.0"

from .z2core import BitMat, BitVec, Graph, OEdge  # noqa: F401
from .opalg import PauliSum, PauliTerm, QubitRegister, SparseState  # noqa: F401
