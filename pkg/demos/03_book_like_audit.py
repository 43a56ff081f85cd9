"""Book-like truncations: sphere sizes, valences, cut-offs and completeness constants.

Run: python3 demos/03_book_like_audit.py
"""
from maghodge.completeness import canonical_cutoffs, chi_completeness_audit, degree_growth_check
from maghodge.generators import BookLikeSpec, gen_book_like

for beta in (0.5, 1.0, 2.0):
    T, alpha, dec = gen_book_like(BookLikeSpec(depth=12, beta=beta))
    origin = dec.spheres[0][0]
    sizes = [len(s) for s in dec.spheres]
    growth = degree_growth_check(T, origin)
    fam = canonical_cutoffs(T, origin, 12)
    rep = chi_completeness_audit(T, fam)
    print(f"beta={beta}: sphere sizes {sizes}")
    print(f"  max sup-degree / n^2 = {growth['max_ratio_V']:.2f} (bounded trend: {growth['bounded_V']})")
    print(f"  cut-off gradients {[str(g) for g in fam.exact_gradient_sup()[:5]]} ...")
    print(f"  C1 = {rep.C1_constant:.3f}, C2 = {rep.C2_constant:.3f}")
