"""Magnetic operators on one triangle: adjointness, gauge shifts, curvature.

Run: python3 demos/01_operators_and_gauge.py
"""
import math

import numpy as np

from maghodge import Cochain0, MagneticPotential, d0, d1, delta0, from_cells, inner
from maghodge.cochains import gauge_act, random_cochain
from maghodge.field import face_flux, gauge_transform_potential, is_trivial

T = from_cells("abc", [("a", "b"), ("b", "c"), ("a", "c")], [("a", "b", "c")])
rng = np.random.default_rng(7)

# A potential with angle theta on each side of the cycle a -> b -> c -> a.
theta = math.pi / 2
alpha = MagneticPotential.from_function(
    T, lambda u, v: theta if (u, v) in (("a", "b"), ("b", "c")) else -theta)
print("flux through the face:", face_flux(alpha, ("a", "b", "c")))

# The coboundary and its formal adjoint agree under the weighted pairings.
f, phi = random_cochain(T, 0, rng), random_cochain(T, 1, rng)
print("<d0 f, phi> - <f, delta0 phi> =", abs(inner(d0(T, alpha, f), phi) - inner(f, delta0(T, alpha, phi))))

# A gauge shift alpha -> alpha + d0 g intertwines the operator with multiplication by e^{ig}.
g = rng.uniform(-math.pi, math.pi, T.n_vertices)
beta = gauge_transform_potential(alpha, g)
lhs = d0(T, beta, gauge_act(0, g, f)).values
rhs = gauge_act(1, g, d0(T, alpha, f)).values
print("gauge equivariance residual:", float(np.max(np.abs(lhs - rhs))))

# d1 d0 vanishes only when the field does: compare a flux-free and a flux-carrying potential.
dirac = Cochain0.dirac(T, "a")
print("|d1 d0 delta_a| with flux 3*theta:", abs(d1(T, alpha, d0(T, alpha, dirac)).values[0]),
      " expected", 2 * abs(math.sin(theta / 2)))
flat = MagneticPotential(T)
print("trivial potential witness:", is_trivial(T, flat) is not None,
      " |d1 d0 delta_a| =", abs(d1(T, flat, d0(T, flat, dirac)).values[0]))
