#!/usr/bin/env python3
"""Print the measured behaviour of the named witness families.

Covers the concentration, oscillation, and borderline sequences, the
four-scenario verdict matrix, and the three Jacobian scaling cases.

Usage:
    python3 scripts/witness_families.py [--cases ex61 ex63 ...]
"""

import argparse
import math

from cclab import counterexamples as cex


def show_ex61():
    spec = cex.make_spec("ex61")
    print("ex61: indicator pairing (limit 1, exact on grid-aligned squares)")
    for j in (2, 8, 32, 64):
        v = float(cex.make_sequence(spec, j)["F"].integral()[0])
        print(f"  j={j:3d}  pairing={v:.15f}")


def show_ex62():
    rep = cex.run_case(cex.make_spec("ex62"), (2, 4, 8, 16))
    print("ex62: glued harmonic gradients, smooth pairing decays")
    for j, m in zip((2, 4, 8, 16), rep["M"]):
        print(f"  j={j:3d}  pairing={m: .6e}")


def show_ex63():
    rep = cex.run_case(cex.make_spec("ex63"))
    print("ex63: truncated L log L masses (divergent) vs finite constraint")
    for lv, m in zip(rep["levels"], rep["llogl_masses"]):
        print(f"  M={lv:9.0f}  mass={m:.6f}")
    print(f"  constraint mass = {rep['constraint_mass']:.6f} (finite)")


def show_table1():
    print("scenario matrix (measures / L1 / hardy):")
    for row in cex.table1():
        print(f"  {row.scenario:6s} {row.pattern}")


def show_jacobian_cases():
    rep = cex.run_case(cex.make_spec("jac_case2"), (8, 16, 32, 64))
    print(f"jac_case2 torus: max relative error {rep['max_rel_err']:.2e}")
    grid = cex.run_case(cex.make_spec("jac_case2", mode="grid"),
                        (8, 16, 32, 64, 128))
    print(f"jac_case2 grid: fitted exponent {grid['fitted_exponent']:.4f} "
          f"(expected {grid['expected_exponent']:.4f})")
    rep3 = cex.run_case(cex.make_spec("jac_case3"), (8, 16, 32, 64))
    print(f"jac_case3: max relative error {rep3['max_rel_err']:.2e}, "
          f"pairing/log k in "
          f"[{min(rep3['log_ratios']):.3f}, {max(rep3['log_ratios']):.3f}] "
          f"(pi^2 = {math.pi**2:.3f})")


SHOW = {"ex61": show_ex61, "ex62": show_ex62, "ex63": show_ex63,
        "table1": show_table1, "jacobian": show_jacobian_cases}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cases", nargs="*", default=sorted(SHOW),
                        choices=sorted(SHOW))
    args = parser.parse_args()
    for name in args.cases:
        SHOW[name]()
        print()


if __name__ == "__main__":
    main()
