"""Spectra of the assembled Laplacian, gauge invariance and odd/even pairing.

Run: python3 demos/02_spectra.py
"""
import numpy as np

from maghodge import MagneticPotential, from_cells, spectrum
from maghodge.generators import gen_random
from maghodge.spectral import gauge_spectrum_check, supersymmetry_check

# Classical limit: the simple triangle with no field has vertex spectrum {0, 3, 3}.
K3 = from_cells("abc", [("a", "b"), ("b", "c"), ("a", "c")], [("a", "b", "c")])
print("K3 degree-0 spectrum:", np.round(spectrum(K3, MagneticPotential(K3), 0), 12))

# A seeded random complex with a random potential.
T, alpha = gen_random(seed=3, n_vertices=10, edge_density=0.45, face_density=0.7)
print(f"random complex: {T.n_vertices} vertices, {T.n_edges} edges, {T.n_faces} faces")
ev = spectrum(T, alpha, "full")
print("smallest eigenvalues:", np.round(ev[:5], 10))

f = np.random.default_rng(1).uniform(-np.pi, np.pi, T.n_vertices)
rep = gauge_spectrum_check(T, alpha, f, "full")
print("largest eigenvalue shift under a gauge transform:", rep["max_abs_difference"])

susy = supersymmetry_check(T, alpha)
print(f"nonzero spectra: {susy['even_nonzero']} even, {susy['odd_nonzero']} odd, "
      f"max mismatch {susy['max_abs_difference']:.2e}")
