"""F(n) from the heuristic circuit, a naive predicate oracle and the canonical oracle."""
import argparse

from qoracle.amplify import amplitude_estimation, naive_config, quantum_count
from qoracle.problems import (fib_canonical_poly, fib_good_set, fib_heuristic_circuit, fibonacci)
from qoracle.simcore import nonzero_support, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--m-result", type=int, default=6)
    args = ap.parse_args()
    print(f"{'n':>2} {'F(n)':>5} {'support':>8} {'naive QC':>9} {'canon QC':>9}")
    for n in range(1, args.max_n + 1):
        support = len(nonzero_support(run(fib_heuristic_circuit(n))))
        naive = amplitude_estimation(naive_config(fib_good_set(n), n), args.m_result)
        canon = quantum_count(fib_canonical_poly(n), 0, args.m_result, unsigned=True)
        print(f"{n:>2} {fibonacci(n):>5} {support:>8} {naive.count_estimate:>9.2f} "
              f"{canon.count_estimate:>9.2f}")


if __name__ == "__main__":
    main()
