"""
White noise and local phase robustness
======================================

"""

import numpy as np

from lonpauli import noise_threshold, phi_config, sweep

# thresholds where each witness stops detecting, for growing setting sets
for size in range(2, 7):
    cfg = phi_config(size=size)
    print(f"|L|={size}: CMI up to eps={noise_threshold(cfg, 'cmi'):.4f}, "
          f"CMP up to eps={noise_threshold(cfg, 'cmp'):.4f}")

# a phase on party B keeps CMI maximal at integer theta but moves the correlations
for r in sweep("phase", phi_config(), np.arange(0, 2.01, 0.25)):
    print(f"theta={r.param:.2f} CMI={r.cmi:.4f} ({r.cmi_verdict}) CMP={r.cmp:.4f} ({r.cmp_verdict})")
