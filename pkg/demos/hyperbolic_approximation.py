"""Build truncated hyperbolic approximations of small metric spaces and read
off what their structure says about the space at infinity.

Run:  python3 demos/hyperbolic_approximation.py
"""

import numpy as np

import cheegerlab as cl


def describe(lg, label):
    sizes = {k: len(lg.level_vertices(k)) for k in range(lg.k0, lg.k_max + 1)}
    print(f"\n== {label}")
    print(f"   parameter r = {lg.r:.6g}, levels {lg.k0}..{lg.k_max}, sizes {sizes}")
    rep = cl.structural_checks(lg)
    print(f"   structural ok: {rep.structural_ok}; four-point constant {rep.delta.delta}"
          f" (cap {rep.delta_cap}); max degree {rep.max_degree} <= {rep.degree_cap}")
    cert = cl.level_certificate(lg) if lg.k_max - lg.k0 >= 2 else None
    if cert is None:
        print("   (window too shallow for a level certificate)")
    elif cert.certified:
        print(f"   level certificate: c2 = {cert.c2}, Cheeger lower bound {cert.bound.lower.value}")
    else:
        print(f"   no level certificate: pinched at {cert.violating_vertex} (c2 = {cert.c2})")


def main():
    print("Hyperbolic approximations: leveled ball graphs over a metric space")
    print("------------------------------------------------------------------")

    # A Cantor-set sample is uniformly perfect across its scales, and the
    # approximation certifies a positive Cheeger bound after one coarsening.
    cantor = cl.cantor_sample(6)
    lg = cl.build_truncated(cantor, 1 / 9, 4)
    describe(lg, "Cantor sample, r = 1/9")
    coarse = cl.relevel(lg, 2)
    describe(coarse, "same space, releveled with s = 2 (r' = r^2)")

    # Degenerate boundaries produce chains, and chains never certify.
    single = cl.FiniteMetricSpace(("o",), np.zeros((1, 1)))
    describe(cl.build_truncated(single, 1 / 6, 4, k0=0), "singleton space (a ray prefix)")
    describe(cl.build_truncated(cl.two_point(1.0), 1 / 6, 4), "two-point space (twin chains)")

    # The deepest level identifies with the space: Gromov products from the
    # base track log_{1/r} of center distances up to a bounded slack.
    ident = cl.boundary_identification_check(lg, sample=50, seed=0)
    print(f"\nBoundary identification on 50 deepest pairs: max deviation "
          f"{ident.max_deviation:.3f} (slack {ident.slack}) -> ok = {ident.ok}")


if __name__ == "__main__":
    main()
