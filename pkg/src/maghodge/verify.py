"""Randomised property suites over one complex.

Each ``check_*`` returns a dict with at least ``passed`` and the worst
observed quantity next to its tolerance.  The CLI ``verify`` command and the
acceptance tests both run these.
"""
from __future__ import annotations

import numpy as np

from . import operators as ops
from .cochains import Cochain0, Cochain1, Cochain2, gauge_act, inner, norm, random_cochain
from .field import _as_potential, gauge_transform_potential, is_trivial
from .spectral import (assemble, crosscheck_assembly, gauge_spectrum_check, hermitize_and_check,
                       lemma_constant_probe, spectrum, supersymmetry_check)

__all__ = ["CHECKS", "Tolerances", "run_checks"] + [
    f"check_{n}" for n in ("adjointness", "gauge", "leibniz", "curvature", "assembly",
                           "hermiticity", "spectrum", "lemma")
]


class Tolerances:
    def __init__(self, alg=1e-13, eig=1e-10, hol=1e-9, herm=1e-12, susy=1e-9, zero=1e-14):
        for name, v in (("alg", alg), ("eig", eig), ("hol", hol), ("herm", herm),
                        ("susy", susy), ("zero", zero)):
            if not v > 0:
                raise ValueError(f"tolerance {name} must be positive")
        self.alg, self.eig, self.hol, self.herm, self.susy, self.zero = alg, eig, hol, herm, susy, zero


def _rel(diff, scale):
    return diff / scale if scale > 0 else diff


def check_adjointness(T, alpha, rng, trials=64, tol=1e-13):
    """<d0 f, phi> = <f, delta0 phi> and <d1 phi, psi> = <phi, delta1 psi>.

    The residual is divided by |A u| |v| (Cauchy-Schwarz scale of either side).
    """
    a = _as_potential(T, alpha)
    w0 = w1 = 0.0
    for _ in range(trials):
        f = random_cochain(T, 0, rng)
        phi = random_cochain(T, 1, rng)
        psi = random_cochain(T, 2, rng)
        df, dphi = ops.d0(T, a, f), ops.delta0(T, a, phi)
        scale = max(norm(df) * norm(phi), norm(f) * norm(dphi))
        w0 = max(w0, _rel(abs(inner(df, phi) - inner(f, dphi)), scale))
        d1p, dpsi = ops.d1(T, a, phi), ops.delta1(T, a, psi)
        scale = max(norm(d1p) * norm(psi), norm(phi) * norm(dpsi))
        w1 = max(w1, _rel(abs(inner(d1p, psi) - inner(phi, dpsi)), scale))
    return {"passed": max(w0, w1) <= tol, "degree0": w0, "degree1": w1, "tol": tol}


def _maxrel(lhs, rhs):
    if lhs.size == 0:
        return 0.0
    return _rel(float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(rhs))))


def check_gauge(T, alpha, rng, trials=64, tol=1e-13):
    """d_{alpha + d0 f}(gauge_f u) = gauge_f(d_alpha u) in degrees 0 and 1."""
    a = _as_potential(T, alpha)
    w0 = w1 = 0.0
    for _ in range(trials):
        f = rng.uniform(-np.pi, np.pi, T.n_vertices)
        b = gauge_transform_potential(a, f)
        g = random_cochain(T, 0, rng)
        phi = random_cochain(T, 1, rng)
        lhs = ops.d0(T, b, gauge_act(0, f, g)).values
        rhs = gauge_act(1, f, ops.d0(T, a, g)).values
        w0 = max(w0, _maxrel(lhs, rhs))
        lhs = ops.d1(T, b, gauge_act(1, f, phi)).values
        rhs = gauge_act(2, f, ops.d1(T, a, phi)).values
        w1 = max(w1, _maxrel(lhs, rhs))
    return {"passed": max(w0, w1) <= tol, "d0": w0, "d1": w1, "tol": tol}


def check_leibniz(T, alpha, rng, trials=64, tol=1e-13):
    a = _as_potential(T, alpha)
    worst = {}
    for _ in range(trials):
        f, g = random_cochain(T, 0, rng), random_cochain(T, 0, rng)
        phi, psi = random_cochain(T, 1, rng), random_cochain(T, 2, rng)
        for name, r in ops.leibniz_suite(T, a, f, g, phi, psi).items():
            worst[name] = max(worst.get(name, 0.0), r["residual"] / r["scale"])
    return {"passed": all(v <= tol for v in worst.values()), "residuals": worst, "tol": tol}


def check_curvature(T, alpha, rng, trials=64, tol=1e-13, zero_tol=1e-14, hol_tol=1e-9):
    """Closed forms of d1 d0 and delta0 delta1; vanishing for trivial potentials."""
    a = _as_potential(T, alpha)
    trivial = is_trivial(T, a, hol_tol) is not None
    wf = wd = wz = 0.0
    for _ in range(trials):
        f = random_cochain(T, 0, rng)
        psi = random_cochain(T, 2, rng)
        comp = ops.curvature_d1d0(T, a, f).values
        wf = max(wf, _maxrel(comp, ops.curvature_d1d0_closed_form(T, a, f).values))
        comp2 = ops.curvature_delta0delta1(T, a, psi).values
        wd = max(wd, _maxrel(comp2, ops.curvature_delta0delta1_closed_form(T, a, psi).values))
        if trivial and comp.size:
            wz = max(wz, float(np.max(np.abs(comp))) / float(np.max(np.abs(f.values))))
    ok = wf <= tol and wd <= tol and (not trivial or wz <= zero_tol)
    return {"passed": ok, "trivial_potential": trivial, "d1d0_closed_form": wf,
            "delta0delta1_closed_form": wd, "d1d0_if_trivial": wz, "tol": tol,
            "zero_tol": zero_tol}


def check_assembly(T, alpha, rng, trials=64, tol=1e-13):
    rep = crosscheck_assembly(T, alpha, rng, trials, tol)
    return {"passed": all(r["passed"] for r in rep.values()),
            "max_relative_difference": {k: r["max_relative_difference"] for k, r in rep.items()},
            "tol": tol}


def laplacian_by_columns(T, alpha) -> np.ndarray:
    """Matrix of the map-level Laplacian, built by applying it to unit cochains."""
    a = _as_potential(T, alpha)
    sizes = (T.n_vertices, T.n_edges, T.n_faces)
    n = sum(sizes)
    cols = np.zeros((n, n), dtype=complex)
    j = 0
    for deg in range(3):
        for i in range(sizes[deg]):
            parts = [Cochain0(T), Cochain1(T), Cochain2(T)]
            parts[deg].values[i] = 1.0
            out = ops.laplacian(T, a, tuple(parts))
            cols[:, j] = np.concatenate([p.values for p in out])
            j += 1
    return cols


def check_hermiticity(T, alpha, tol_herm=1e-12, tol_alg=1e-13, tol_eig=1e-10):
    """Metric-symmetrised T_alpha and Delta_alpha are Hermitian; Delta = T^2."""
    Tm = assemble(T, alpha, "T_alpha")
    Lm = assemble(T, alpha, "Delta_alpha")
    ht = hermitize_and_check(Tm, tol_herm)
    hl = hermitize_and_check(Lm, tol_herm)
    cols = laplacian_by_columns(T, alpha)
    sq = Tm.matrix @ Tm.matrix
    scale = float(np.max(np.abs(sq))) if sq.size else 1.0
    square = _rel(float(np.max(np.abs(cols - sq))) if sq.size else 0.0, scale)
    ev = np.linalg.eigvalsh(0.5 * (hl["symmetrized"] + hl["symmetrized"].conj().T)) \
        if sq.size else np.zeros(0)
    lo = float(ev.min()) if ev.size else 0.0
    ok = ht["passed"] and hl["passed"] and square <= tol_alg and lo >= -tol_eig
    return {"passed": bool(ok), "T_alpha_asymmetry": ht["max_asymmetry"] / max(ht["max_entry"], 1e-300),
            "Delta_alpha_asymmetry": hl["max_asymmetry"] / max(hl["max_entry"], 1e-300),
            "Delta_equals_T_squared": square, "min_eigenvalue": lo,
            "tol_herm": tol_herm, "tol_alg": tol_alg, "tol_eig": tol_eig}


def check_spectrum(T, alpha, rng, tol_eig=1e-10, tol_susy=1e-9, cap=4000):
    """Positivity, gauge invariance of the sorted spectrum, and odd/even matching."""
    a = _as_potential(T, alpha)
    ev = spectrum(T, a, "full", cap)
    f = rng.uniform(-np.pi, np.pi, T.n_vertices)
    gauge = gauge_spectrum_check(T, a, f, "full", tol_eig, cap)
    susy = supersymmetry_check(T, a, tol_susy, cap=cap)
    lo = min(ev) if ev else 0.0
    ok = lo >= -tol_eig and gauge["passed"] and susy["passed"]
    return {"passed": bool(ok), "min_eigenvalue": lo,
            "gauge_max_abs_difference": gauge["max_abs_difference"],
            "supersymmetry_max_abs_difference": susy["max_abs_difference"],
            "nonzero_even": susy["even_nonzero"], "nonzero_odd": susy["odd_nonzero"],
            "tol_eig": tol_eig, "tol_susy": tol_susy}


def check_lemma(T, alpha, seed, trials=256):
    rep = lemma_constant_probe(T, alpha, trials=trials, seed=seed)
    return rep


CHECKS = ("adjointness", "gauge", "leibniz", "curvature", "assembly", "hermiticity",
          "spectrum", "lemma")


def run_checks(T, alpha, selected=None, seed=0xC0FFEE, trials=64, tol: Tolerances | None = None,
               cap=4000) -> dict:
    """Run the chosen suites (all by default) with one seeded generator.

    Each suite gets its own child generator spawned from ``seed`` so that
    deselecting one suite does not change the draws of the others.
    """
    tol = tol or Tolerances()
    selected = list(CHECKS) if selected is None else list(selected)
    unknown = [c for c in selected if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    children = dict(zip(CHECKS, np.random.SeedSequence(seed).spawn(len(CHECKS))))
    results = {}
    for name in CHECKS:
        if name not in selected:
            continue
        rng = np.random.default_rng(children[name])
        if name == "adjointness":
            results[name] = check_adjointness(T, alpha, rng, trials, tol.alg)
        elif name == "gauge":
            results[name] = check_gauge(T, alpha, rng, trials, tol.alg)
        elif name == "leibniz":
            results[name] = check_leibniz(T, alpha, rng, trials, tol.alg)
        elif name == "curvature":
            results[name] = check_curvature(T, alpha, rng, trials, tol.alg, tol.zero, tol.hol)
        elif name == "assembly":
            results[name] = check_assembly(T, alpha, rng, trials, tol.alg)
        elif name == "hermiticity":
            results[name] = check_hermiticity(T, alpha, tol.herm, tol.alg, tol.eig)
        elif name == "spectrum":
            results[name] = check_spectrum(T, alpha, rng, tol.eig, tol.susy, cap)
        elif name == "lemma":
            results[name] = check_lemma(T, alpha, int(rng.integers(2**32)), max(trials, 1) * 4)
    return {"passed": all(r["passed"] for r in results.values()),
            "checks": results,
            "skipped": [c for c in CHECKS if c not in selected]}
