"""
Fock sectors and multiphoton amplitudes
=======================================

"""

import math

import numpy as np

from lonpauli import ModeUnitary, SectorState, enumerate_basis, evolve, lift_unitary, permanent
from lonpauli.fock import random_unitary

# the 2-photon sector of 4 modes has C(5, 2) = 10 occupation vectors
basis = enumerate_basis(4, 2)
print("basis:", basis.vectors)
print("size:", basis.dim)

# permanents are the amplitude kernel
print("per(ones 3x3) =", permanent(np.ones((3, 3))).real)

# Hong-Ou-Mandel: |11> through a 50:50 beam splitter never leaves one photon per mode
bs = ModeUnitary(np.array([[1, 1], [1, -1]]) / math.sqrt(2))
out = evolve(SectorState.fock((1, 1)), bs)
for v, a in out.support().items():
    print(v, np.round(a, 6))

# the lifted matrix of any mode unitary is unitary on the sector
G = lift_unitary(random_unitary(4, np.random.default_rng(0)), basis)
print("max |G^dag G - 1| =", np.abs(G.conj().T @ G - np.eye(basis.dim)).max())
