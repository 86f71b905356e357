"""Encode a subset-sum instance, render its pixel graph, count and search its zero-sum subsets."""
import argparse
from pathlib import Path

from qoracle.amplify import canonical_config, grover_search, quantum_count
from qoracle.problems import classical_count, subset_sum_poly, zero_set
from qoracle.qdict import encode
from qoracle.simcore import bitstring
from qoracle.viz import render_state, write_atomic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("values", nargs="*", type=int, default=[2, 1, -5, 2])
    ap.add_argument("--m-result", type=int, default=6)
    ap.add_argument("--out", type=Path, default=Path("zero_sum.ppm"))
    args = ap.parse_args()

    poly = subset_sum_poly(args.values)
    enc = encode(poly)
    write_atomic(args.out, render_state(enc, signed_rows=True).to_ppm(scale=16))
    n = poly.num_vars
    print(f"polynomial {poly}; layout n={enc.layout.key_qubits} m={enc.layout.value_qubits}")
    print("zero-sum subsets:", [bitstring(k, n) for k in sorted(zero_set(poly))])

    r = quantum_count(poly, 0, args.m_result)
    print(f"quantum count {r.count_estimate:.3f} (classical {classical_count(poly, 0)})")

    cfg, b = canonical_config(poly, 0)
    res = grover_search(cfg, max(1, classical_count(poly, 0)), finish=b)
    print(f"search: {res.iterations} iterations, success probability {res.success_probability:.4f}")
    print(f"pixel graph written to {args.out}")


if __name__ == "__main__":
    main()
