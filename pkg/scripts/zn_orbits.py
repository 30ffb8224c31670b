"""Orbits of y -> x (+) y in Z_N and the realised orders p_set(n) next to the gcd set."""
import argparse

from nonassoc.quasigroup import orbits, p_set, p_set_gcd, period_set


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=15)
    ap.add_argument("--x", type=int, default=1)
    ap.add_argument("--nmax", type=int, default=12)
    args = ap.parse_args()
    print(f"orbits of y -> {args.x} (+) y in Z_{args.N}:")
    for cyc in orbits(args.N, args.x):
        print("  " + " -> ".join(str(c if c else args.N) for c in cyc))
    print("\n n  realised orders   gcd set           periods")
    for n in range(2, args.nmax + 1):
        P, G, Q = sorted(p_set(n)), sorted(p_set_gcd(n)), sorted(period_set(n))
        flag = "" if P == G else "  differs"
        print(f"{n:2d}  {str(P):17s} {str(G):17s} {Q}{flag}")


if __name__ == "__main__":
    main()
