"""Print the idempotent quasigroup of A3 in its reference labelling and its Z_7 relabelling."""
import argparse

import numpy as np

from nonassoc.idempotents import enumerate_newton
from nonassoc.models import build_A3, reference_labels
from nonassoc.quasigroup import QuasigroupTable, find_relabel_permutation, idm_table, relabel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    A = build_A3()
    S = enumerate_newton(A, seed=args.seed)
    T = idm_table(A, S).table
    order = [S.index_of(v) for v in reference_labels(A)]
    inv = {o: i for i, o in enumerate(order)}
    t = np.array([[inv[T[order[i], order[j]]] for j in range(7)] for i in range(7)])
    print("c_i c_j in A3:")
    print(QuasigroupTable(t).ascii())
    phi = find_relabel_permutation(t)
    print("\nphi(c_i) in Z_7:", [p if p else 7 for p in phi])
    print("(i + j)/2 mod 7:")
    print(QuasigroupTable(relabel(t, phi)).ascii())


if __name__ == "__main__":
    main()
