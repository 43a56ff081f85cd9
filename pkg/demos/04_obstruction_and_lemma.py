"""A potential whose obstruction grows with distance, and the cross-term probe.

Run: python3 demos/04_obstruction_and_lemma.py
"""
import math

from maghodge import MagneticPotential, from_cells, lemma_constant_probe
from maghodge.completeness import chi_alpha_obstruction, strictly_increasing_run
from maghodge.generators import gen_onedim, potential_sphere_pi

# Spheres of sizes 1, 1, 2, ..., 12 joined completely between consecutive levels.
T, dec = gen_onedim([1] + list(range(1, 13)), intra="path", cross="full", faces="all")
obs = chi_alpha_obstruction(T, potential_sphere_pi(T, dec))
per_level = [max(obs[v] for v in s) for s in dec.spheres]
print("obstruction sup per sphere:", [round(x) for x in per_level])
print("strictly increasing over", strictly_increasing_run(per_level), "levels")

# On a triangle with flux 3*pi the cross term reaches 2*sqrt(3), above 3*sqrt(C) with C = 1.
T = from_cells("abc", [("a", "b"), ("b", "c"), ("a", "c")], [("a", "b", "c")])
alpha = MagneticPotential.from_function(
    T, lambda u, v: math.pi if (u, v) in (("a", "b"), ("b", "c")) else -math.pi)
rep = lemma_constant_probe(T, alpha)
print(f"C = {rep['C']:.3f}, exact norm = {rep['exact_norm']:.4f}, "
      f"3*sqrt(C) = {rep['nominal_bound']:.4f}, factor flag = {rep['factor_flag']}")
