"""Uniform perfectness on finite samples, and the dictionary between a tree's
branching rate and the perfectness of its space of ends.

Run:  python3 demos/perfectness_and_ends.py
"""

import math

import cheegerlab as cl


def main():
    print("Uniform perfectness: no empty annuli across the declared scales")
    print("----------------------------------------------------------------")

    cantor = cl.cantor_sample(7)
    cert = cl.uniformly_perfect_check(cantor, 3.01, 1.0, cantor.resolution_floor)
    print(f"\nCantor sample (128 points): S = 3.01 down to floor "
          f"{cantor.resolution_floor:.3g} -> holds = {cert.holds} "
          f"({cert.checked_eps} scales checked)")

    two = cl.two_point(1.0)
    fail = cl.uniformly_perfect_check(two, 2.0, 1.0, 0.25)
    print(f"two-point space: holds = {fail.holds}, witness (point, scale) = {fail.witness}")

    # the two-point form trades the constant both ways
    r_const = 9.1
    both = cl.two_point_perfectness_check(cantor, r_const, 1.0, cantor.resolution_floor)
    print(f"two-point form with R = {r_const}: holds = {both.holds}; "
          f"it implies the one-point form with S = {cl.two_point_to_one_point_constant(r_const)}")

    print("\nTree ends: branching every K levels = e^K-uniformly perfect ends")
    print("-----------------------------------------------------------------")
    for t, label in (
        (cl.homogeneous_tree(3, 7), "3-regular tree"),
        (cl.even_branching_tree(8), "even-depth branching"),
    ):
        k = cl.pseudo_regularity_index(t).k
        space = cl.end_space(t)
        cert = cl.uniformly_perfect_check(
            space, math.exp(k), math.exp(-1), math.exp(-(t.horizon - k))
        )
        print(f"   {label}: K = {k}, ends = {len(space.points)} points, "
              f"e^K-perfect on the window scales -> {cert.holds}")

    chain = cl.growing_chain(8)
    print(f"   single live chain: ends = {len(cl.end_space(chain).points)} point "
          "(nothing to separate, and indeed its Cheeger constant vanishes)")


if __name__ == "__main__":
    main()
