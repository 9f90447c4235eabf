"""Synthesize the reference hologram and look at its numbers.

A unit point source sits at (0, 2.5, 0), the incident plane wave travels
along e1 with wavenumber 4, and the detector is the plane x1 = 100.  We
sample I = |psi0 + psi1|^2 on a 100 x 100 patch of half-width 20 and dump
it as CSV and as an 8-bit PGM picture.
"""

import os

import numpy as np

from holoplane import (
    ExperimentConfig,
    hologram_to_csv,
    hologram_to_pgm,
    sample_hologram,
)

cfg = ExperimentConfig()
holo = sample_hologram(cfg.radiation_field(), cfg.wave_params(), cfg.grid_spec())

print("grid nodes      :", len(holo.values))
print("intensity range : %.4f .. %.4f" % (holo.values.min(), holo.values.max()))
print("mean intensity  : %.4f" % holo.values.mean())

# the interference fringes oscillate around the background level 1
contrast = holo.values - 1.0
print("fringe contrast : +/- %.4f (rms %.4f)" % (np.abs(contrast).max(),
                                                 np.sqrt((contrast**2).mean())))

os.makedirs("out", exist_ok=True)
hologram_to_csv(holo, "out/hologram.csv")
hologram_to_pgm(holo, "out/hologram.pgm")
print("wrote out/hologram.csv and out/hologram.pgm")
