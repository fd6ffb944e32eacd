#!/usr/bin/env python3
"""Classical-limit suite for projective spaces.

For each dimension up to --max-dim: print the pairing, confirm the
degree-zero quantum product collapses to the classical multiplication
table, and verify associativity, flatness, and unit residuals vanish.
Positive-degree checks need correlator input; see the qkzero CLI.
"""

import argparse
import time

from qkzero import (
    CorrelatorTable,
    TruncatedSeries,
    assemble_potential,
    build_frobenius_data,
    classical_limit_residual,
    flatness_residuals,
    projective_space_kring,
    unit_residual,
    wdvv_residual,
)


def run_dimension(nproj: int, t_order: int) -> bool:
    ring = projective_space_kring(nproj)
    print(f"\nprojective space of dimension {nproj}, rank {ring.rank}")
    print("pairing (rows are basis elements):")
    for row in ring.pairing:
        print("  " + " ".join(str(v) for v in row))

    table = CorrelatorTable.empty(ring, 1, {"type": "projective", "n": nproj})
    potential = assemble_potential(ring, table, t_order, 0)
    fd = build_frobenius_data(potential)

    spec3 = fd.product[0][0][0].spec
    classical = all(
        fd.product[i][j][k] == TruncatedSeries.constant(spec3, ring.mult[i][j][k])
        for i in range(ring.rank)
        for j in range(ring.rank)
        for k in range(ring.rank))
    flat = flatness_residuals(fd)
    residuals = {
        "product equals classical table": classical,
        "associativity": wdvv_residual(fd).is_zero,
        "unit": unit_residual(fd).is_zero,
        "degree-zero slice": classical_limit_residual(fd).is_zero,
        "flatness": flat.is_zero,
    }
    for name, ok in residuals.items():
        print(f"  {name}: {'ok' if ok else 'VIOLATED'}")
    return all(residuals.values())


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-dim", type=int, default=3,
                        help="largest projective dimension to run")
    parser.add_argument("--t-order", type=int, default=6,
                        help="truncation order in the deformation variables")
    args = parser.parse_args()

    started = time.perf_counter()
    all_ok = all(
        # evaluate every dimension, then fold
        [run_dimension(nproj, args.t_order)
         for nproj in range(1, args.max_dim + 1)])
    print(f"\nelapsed: {time.perf_counter() - started:.2f}s")
    raise SystemExit(0 if all_ok else 3)


if __name__ == "__main__":
    main()
