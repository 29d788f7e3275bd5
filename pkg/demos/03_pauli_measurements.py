"""
Pauli measurements with a Hadamard network and photon counting
==============================================================

"""

import numpy as np

from lonpauli import build_pauli_eigenstate, build_psi0, decohere, measure, parse_config, pauli_measurement
from lonpauli.pauli import pauli_class_of

np.set_printoptions(precision=4, suppress=True)

# a Lambda_0 eigenstate of the E11000 class with label 0
e = build_pauli_eigenstate(pauli_class_of((1, 1, 0, 0, 0)), 0, 0).to_state()

# its own measurement is deterministic, the others are uniform
for j in range(5):
    print(f"Lambda_{j}:", pauli_measurement(e, j).probs)

# psi0 superposes two such eigenstates from different classes
psi0 = build_psi0()
D = decohere(psi0)
for name in ["xi", "l0", "l1", "l2", "l3", "l4"]:
    cfg = parse_config(name, 5)
    print(name, measure(psi0, cfg).probs, measure(D, cfg).probs)

# per-class detail of the Xi outcome
detail = measure(psi0, parse_config("xi", 5), breakdown=True).breakdown
for (cls, m), p in sorted(detail.items()):
    print(cls, m, round(p, 6))
