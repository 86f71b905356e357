"""Amplitude estimation on the Bell state for single- and two-outcome marked sets."""
import argparse

from qoracle.amplify import amplitude_estimation, naive_config
from qoracle.problems import bell_circuit
from qoracle.simcore import bitstring, probability_of, run

CASES = [{0b00}, {0b01}, {0b00, 0b11}, {0b01, 0b10}]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-result", type=int, default=3)
    args = ap.parse_args()
    bell = run(bell_circuit())
    print(f"{'marked':<12} {'expected':>8} {'estimate':>9}")
    for good in CASES:
        r = amplitude_estimation(naive_config(good, 2, bell_circuit()), args.m_result)
        label = ",".join(bitstring(s, 2) for s in sorted(good))
        print(f"{label:<12} {probability_of(bell, good):>8.3f} {r.p_estimate:>9.5f}")


if __name__ == "__main__":
    main()
