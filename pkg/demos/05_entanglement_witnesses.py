"""
Complementary mutual information and predictability
===================================================

"""

import numpy as np

from lonpauli import (
    BipartiteState,
    build_phi_3A2B,
    cmi_report,
    cmp_report,
    extract_targets,
    joint_pauli_measurement,
    parse_config,
    phi_config,
)

phi = build_phi_3A2B()

# perfect label correlations under Lambda_2 x Lambda_2
J = joint_pauli_measurement(phi, (parse_config("l2", 5), parse_config("l2", 5)))
print(np.round(J.probs, 3))

cfg = phi_config()
cfg = cfg.with_targets(extract_targets(phi, cfg))
print("pairs:", cfg.names, "targets:", cfg.targets)

for label, state in [("phi", phi), ("|11100>|11000>", BipartiteState.fock((1, 1, 1, 0, 0), (1, 1, 0, 0, 0)))]:
    ri, rp = cmi_report(state, cfg), cmp_report(state, cfg)
    print(f"{label}: CMI {ri.value:.4f} (bound {ri.bound:.4f}, {ri.verdict}); "
          f"CMP {rp.value:.4f} (bound {rp.bound:.4f}, {rp.verdict})")
