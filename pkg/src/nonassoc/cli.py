"""Command-line interface: nonassoc {model,idempotents,verify,quasigroup,zn,iso}.

Exit status 0 when every check passes, 1 on a failed check or negative
verdict, 2 on usage errors. NONASSOC_SEED replaces the default seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import idempotents as idm_mod
from . import medial, models, peirce, quasigroup
from .algebra import Algebra
from .errors import AlgebraError, DimensionMismatch, FieldError, NotARoot
from .idempotents import IdempotentSet
from .scalar import COMPLEX_FIELD, prime_field, root_powers

CHECKS = ("medial", "isospectral", "generic", "syzygy", "fusion", "bn", "lxn", "det-hom", "kaplansky", "theta")
PRIME_CHECKS = ("medial", "isospectral", "generic", "kaplansky")
ACTIONS = ("table", "latin", "medial", "cyclic", "relabel")
MODELS = ("a2", "a3", "cn", "f", "t", "twisted-double", "twisted-power", "direct-product", "fp-pairs",
          "medial-extension", "random", "perturbed")


class UsageError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("NONASSOC_SEED")
    if env is None:
        return idm_mod.DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"NONASSOC_SEED={env!r} is not an integer") from exc


def _seed(args) -> int:
    return args.seed if args.seed is not None else default_seed()


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1, default=_jsonable) + "\n")


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(np.real(o)), float(np.imag(o))]
    if isinstance(o, np.ndarray):
        return [_jsonable(x) if not isinstance(x, np.ndarray) else _jsonable(x) for x in o]
    raise TypeError(f"cannot serialise {type(o)}")


def _num(x):
    """Residuals as plain floats; non-finite values become null."""
    x = float(x)
    return x if np.isfinite(x) else None


# ---------------------------------------------------------------- model

def _field(args):
    if args.field == "prime":
        if args.p is None:
            raise UsageError("--field prime needs --p")
        return prime_field(args.p)
    return COMPLEX_FIELD


def _parse_zeta(text, field, d):
    """'-1', '1', an integer residue over F_p, a complex literal, or 'eps^k' (k-th power of a primitive d-th root)."""
    if text is None:
        raise UsageError("--zeta is required")
    if text.startswith("eps^"):
        return root_powers(d, field)[int(text[4:]) % d]
    if field.is_prime:
        return int(text) % field.p
    return complex(text.replace(" ", ""))


def _base(name, args, field):
    if name in ("f", "F"):
        return models.field_algebra(field)
    if name == "a2":
        return models.build_A2(field)
    if name == "a3":
        if field.is_prime:
            raise UsageError("a3 is defined over C")
        return models.build_A3()
    if name == "cn":
        if args.n is None:
            raise UsageError("cn needs --n")
        return models.build_Cn(args.n, field)
    if name == "t":
        return models.build_T(field)
    raise UsageError(f"unknown base {name!r}")


def build_model(args) -> Algebra:
    field = _field(args)
    name = args.name
    if name in ("a2", "a3", "cn", "f", "t"):
        return _base(name, args, field)
    if name in ("twisted-double", "fp-pairs"):
        base = _base(args.base or "f", args, field)
        return models.twisted_double(base, _parse_zeta(args.zeta, field, 2))
    if name == "twisted-power":
        if args.d is None:
            raise UsageError("twisted-power needs --d")
        base = _base(args.base or "f", args, field)
        return models.twisted_power(base, args.d, _parse_zeta(args.zeta, field, args.d))
    if name == "direct-product":
        if not args.base or not args.base2:
            raise UsageError("direct-product needs --base and --base2")
        return models.direct_product(_base(args.base, args, field), _base(args.base2, args, field))
    if name == "medial-extension":
        if args.table:
            with open(args.table) as fh:
                table = np.asarray(json.load(fh), dtype=np.int64)
        elif args.zn:
            table = quasigroup.build_ZN_quasigroup(args.zn).table
        else:
            raise UsageError("medial-extension needs --table or --zn")
        return models.medial_extension(table, field)
    if name == "random":
        if args.n is None:
            raise UsageError("random needs --n")
        return models.random_symmetric(args.n, _seed(args), field)
    if name == "perturbed":
        return models.perturb(_base(args.base or "cn", args, field), args.scale, _seed(args))
    raise UsageError(f"unknown model {name!r}")


def cmd_model(args) -> int:
    A = build_model(args)
    if args.output:
        A.save(args.output)
        _emit({"model": A.meta.get("model"), "dim": A.dim, "field": A.field.to_json(), "output": args.output})
    else:
        _emit(A.to_json())
    return 0


# ---------------------------------------------------------------- idempotents

def _load_algebra(path) -> Algebra:
    try:
        return Algebra.load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: not an algebra file ({exc})") from exc


def enumerate_with(A: Algebra, method: str, seed: int) -> IdempotentSet:
    if method == "auto":
        return idm_mod.enumerate_auto(A, seed=seed)
    if method == "closed-form":
        if A.meta.get("model") != "Cn" or A.field.is_prime:
            raise UsageError("closed-form enumeration applies to complex C_n files only")
        return idm_mod.enumerate_closed_form_Cn(A.meta["n"], A)
    if method == "newton":
        if A.field.is_prime:
            raise UsageError("newton needs a complex algebra")
        return idm_mod.enumerate_newton(A, seed=seed)
    if method == "brute":
        if not A.field.is_prime:
            raise UsageError("brute force needs a prime field")
        return idm_mod.enumerate_brute_force(A)
    raise UsageError(f"unknown method {method!r}")


def cmd_idempotents(args) -> int:
    A = _load_algebra(args.algebra)
    S = enumerate_with(A, args.method, _seed(args))
    if args.output:
        S.save(args.output)
    status = "complete" if S.complete else "complete=false"
    summary = {"count": len(S), "expected": S.expected, "complete": bool(S.complete), "method": S.method,
               "summary": f"{len(S)} idempotents, {status}"}
    if not args.output:
        summary["idempotents"] = S.to_json()
    _emit(summary)
    if not S.complete:
        sys.stderr.write(f"warning: complete=false ({len(S)} found, {S.expected} expected if generic)\n")
    return 0


def _load_idm(args, A: Algebra, seed: int) -> IdempotentSet:
    if args.idm:
        try:
            return IdempotentSet.load(args.idm, A)
        except FileNotFoundError as exc:
            raise UsageError(f"no such file: {args.idm}") from exc
    return idm_mod.enumerate_auto(A, seed=seed)


# ---------------------------------------------------------------- verify

def _entry(name, ok, residual, detail="", samples=None, seed=None):
    return {"check": name, "pass": bool(ok), "residual": _num(residual), "detail": detail,
            "samples": samples, "seed": seed}


def _invertible_idempotents(A, S):
    out = []
    for c in S.elements:
        L = A.L(c)
        if A.field.is_prime:
            from .linalg import det
            if det(L, A.field) != 0:
                out.append(c)
        elif np.linalg.matrix_rank(L, tol=1e-9) == A.dim:
            out.append(c)
    return out


def run_check(name, A: Algebra, S: IdempotentSet, seed: int, samples: int, sampled: bool):
    tol = 1e-9
    if name == "medial":
        r = medial.is_medial_basis(A, sample_count=samples, seed=seed)
        agree = r.verdict == medial.squared_identity_verdict(r.squared_identity_residual)
        return _entry(name, r.verdict, r.basis_quadruple_residual,
                      f"squared identity residual {r.squared_identity_residual:.3g}; verdicts agree: {agree}",
                      samples, seed)
    if name == "isospectral":
        if len(S) == 0:
            return _entry(name, False, float("inf"), "no nonzero idempotents")
        ok, wit = peirce.is_isospectral(A, S, sampled=sampled)
        if A.field.is_prime:
            return _entry(name, ok, 0.0 if ok else 1.0, f"witness {wit}" if wit else f"{len(S)} idempotents")
        spectra = [peirce.peirce_decompose(A, c).spectrum for c in S.elements]
        dist = max(peirce.spectrum_distance(spectra[0], s) for s in spectra)
        return _entry(name, ok, dist, f"witness {wit}" if wit else f"{len(S)} idempotents")
    if name == "generic":
        g = idm_mod.check_generic(A, S, seed=seed)
        return _entry(name, g.verdict, 0.0 if g.verdict else 1.0,
                      f"{g.count}/{g.expected} idempotents, half in spectrum: {g.half_in_spectrum}, "
                      f"2-nilpotent found: {g.nilpotent_found is not None}")
    if name == "syzygy":
        rng = np.random.default_rng(seed)
        r = np.sqrt(rng.uniform(0, 1, 10)) * np.exp(2j * np.pi * rng.uniform(0, 1, 10))
        s1 = float(np.max(np.abs(S.elements.sum(axis=0))))
        s2 = idm_mod.syzygy_charpoly(A, S, r)
        return _entry(name, max(s1, s2) < 1e-8, max(s1, s2), f"sum of idempotents {s1:.3g}; charpoly {s2:.3g}",
                      10, seed)
    if name == "fusion":
        res = max(peirce.fusion_check(A, c) for c in S.elements)
        return _entry(name, res < 1e-8, res, f"{len(S)} idempotents")
    c0 = S.elements[0] if len(S) else None
    if name == "bn":
        r = medial.verify_Bn(A, c0, samples, seed)
        res = max(r.power_residual, r.multiplicativity_residual)
        return _entry(name, res < 1e-8, res, f"power {r.power_residual:.3g}; multiplicativity "
                      f"{r.multiplicativity_residual:.3g}", samples, seed)
    if name == "lxn":
        res = medial.verify_Lxn_identity(A, c0, samples, seed)
        return _entry(name, res < 1e-8, res, "", samples, seed)
    if name == "det-hom":
        inv = _invertible_idempotents(A, S)
        if not inv:
            return _entry(name, False, float("inf"), "no invertible idempotent")
        res = medial.det_homomorphism_check(A, inv[0], samples, seed)
        return _entry(name, res < 1e-8, res, "", samples, seed)
    if name == "kaplansky":
        inv = _invertible_idempotents(A, S)
        if not inv:
            return _entry(name, False, float("inf"), "no invertible idempotent")
        worst = 0.0
        for c in inv:
            iso = medial.kaplansky_isotope(A, c)
            worst = max(worst, iso.meta["associativity_residual"], iso.meta["unit_residual"])
        return _entry(name, worst <= tol, worst, f"{len(inv)} invertible idempotents")
    if name == "theta":
        rng = np.random.default_rng(seed)
        y = rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim)
        rec = peirce.reconstruct_from_idempotents(A, S, y)
        res = float(np.linalg.norm(rec - y) / np.linalg.norm(y))
        return _entry(name, res < 1e-8, res, "reconstruction from theta_0 projections", 1, seed)
    raise UsageError(f"unknown check {name!r}")


def cmd_verify(args) -> int:
    A = _load_algebra(args.algebra)
    seed = _seed(args)
    names = [s.strip() for s in args.checks.split(",") if s.strip()]
    if names == ["all"]:
        names = list(PRIME_CHECKS if A.field.is_prime else CHECKS)
    for n in names:
        if n not in CHECKS:
            raise UsageError(f"unknown check {n!r}; choose from {', '.join(CHECKS)}")
    S = _load_idm(args, A, seed)
    entries = []
    for n in names:
        try:
            entries.append(run_check(n, A, S, seed, args.samples, args.sampled))
        except AlgebraError as exc:
            entries.append(_entry(n, False, float("inf"), f"{type(exc).__name__}: {exc}"))
    ok = all(e["pass"] for e in entries)
    _emit({"command": ["verify", args.algebra] + (["--idm", args.idm] if args.idm else []) + ["--checks", args.checks]
           + (["--sampled"] if args.sampled else []),
           "checks": entries, "pass": ok})
    return 0 if ok else 1


# ---------------------------------------------------------------- quasigroup

def _reference_order(A: Algebra, S: IdempotentSet):
    ref = models.reference_labels(A)
    if ref is None or len(ref) != len(S):
        return None
    order = [S.index_of(v) for v in ref]
    if None in order or len(set(order)) != len(order):
        return None
    return order


def cmd_quasigroup(args) -> int:
    A = _load_algebra(args.algebra)
    S = _load_idm(args, A, _seed(args))
    acts = [a.strip() for a in args.actions.split(",") if a.strip()]
    for a in acts:
        if a not in ACTIONS:
            raise UsageError(f"unknown action {a!r}; choose from {', '.join(ACTIONS)}")
    if not S.complete:
        raise UsageError("quasigroup analysis needs a complete idempotent set")
    T = quasigroup.idm_table(A, S)
    order = _reference_order(A, S)
    if order is not None:
        inv = {o: i for i, o in enumerate(order)}
        shown = np.array([[inv[T.table[order[i], order[j]]] for j in range(len(order))] for i in range(len(order))])
        labelling = "reference"
    else:
        shown = T.table
        labelling = "canonical"
    shownT = quasigroup.QuasigroupTable(shown)
    out = {"order": T.order, "labelling": labelling}
    ok = True
    text = []
    for a in acts:
        if a == "table":
            out["table"] = (shown + 1).tolist()
            text.append(shownT.ascii())
        elif a == "latin":
            out["latin"] = quasigroup.is_latin(shown)
            ok &= out["latin"]
        elif a == "medial":
            out["medial"] = quasigroup.is_medial_table(shown)
            ok &= out["medial"]
        elif a == "cyclic":
            G = quasigroup.boxplus_group(A, S, 0)
            g = quasigroup.find_generator(G, 0)
            out["cyclic"] = g is not None
            if g is not None:
                k = (order.index(g) if order is not None else g) + 1
                out["generator"] = k
                text.append(f"cyclic of order {T.order}, generator index {k}")
            else:
                text.append(f"not cyclic (order {T.order})")
            ok &= g is not None
        elif a == "relabel":
            phi = quasigroup.find_relabel_permutation(shown)
            out["relabel_verified"] = phi is not None
            ok &= phi is not None
            if phi is not None:
                N = T.order
                # labels 1..N with N standing for 0, as in the Z_N table
                names = [p if p else N for p in phi]
                out["permutation"] = names
                rt = quasigroup.relabel(shown, phi)
                rt_named = np.where(rt == 0, N, rt)
                rows = np.roll(np.arange(N), -1)
                grid = rt_named[np.ix_(rows, rows)]
                out["relabelled_table"] = grid.tolist()
                text.append(quasigroup.QuasigroupTable(grid - 1).ascii())
    out["pass"] = bool(ok)
    if args.format == "text":
        sys.stdout.write("\n\n".join(text) + ("\n" if text else ""))
        sys.stdout.write(json.dumps({k: v for k, v in out.items() if k not in ("table", "relabelled_table")},
                                    default=_jsonable) + "\n")
    else:
        _emit(out)
    return 0 if ok else 1


# ---------------------------------------------------------------- zn

def cmd_zn(args) -> int:
    out = {}
    ok = True
    if args.orders or args.orbits is not None:
        if args.N is None:
            raise UsageError("--orders and --orbits need --N")
        if args.N % 2 == 0 or args.N < 1:
            raise UsageError("--N must be odd and positive")
        out["N"] = args.N
    if args.orders:
        x, y = args.orders
        out["orders"] = {"x": x, "y": y, "order": quasigroup.circ_order(x, y, args.N)}
    if args.orbits is not None:
        cyc = quasigroup.orbits(args.N, args.orbits)
        out["orbits"] = {"x": args.orbits, "cycles": [[v if v else args.N for v in c] for c in cyc],
                         "lengths": sorted(len(c) for c in cyc)}
    if args.pset is not None:
        if args.pset < 2:
            raise UsageError("--pset needs n >= 2")
        realised = sorted(quasigroup.p_set(args.pset))
        gcd = sorted(quasigroup.p_set_gcd(args.pset))
        out["pset"] = {"n": args.pset, "P": realised, "gcd_characterisation": gcd, "agree": realised == gcd}
        ok &= realised == gcd
    if args.N is not None and "N" not in out:
        if args.N % 2 == 0 or args.N < 1:
            raise UsageError("--N must be odd and positive")
        out["N"] = args.N
        out["table"] = (quasigroup.build_ZN_quasigroup(args.N).table).tolist()
    if not out:
        raise UsageError("nothing to do: give --orders, --orbits, --pset or --N")
    _emit(out)
    return 0 if ok else 1


# ---------------------------------------------------------------- iso

def cmd_iso(args) -> int:
    A = _load_algebra(args.a)
    B = _load_algebra(args.b)
    try:
        M = peirce.are_isomorphic(A, B)
    except DimensionMismatch as exc:
        _emit({"isomorphic": False, "detail": f"dimension mismatch: {exc}"})
        return 1
    if M is not None:
        res = peirce.product_preservation_residual(A, B, M)
        _emit({"isomorphic": True, "matrix": M, "product_residual": res})
        return 0
    ca, cb = peirce.canonical_form(A), peirce.canonical_form(B)
    diff = np.abs(ca.tensor - cb.tensor)
    idx = tuple(int(i) for i in np.unravel_index(int(np.argmax(diff)), diff.shape))
    _emit({"isomorphic": False, "first_mismatch": {"index": idx, "a": ca.tensor[idx], "b": cb.tensor[idx]}})
    return 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonassoc", description="Medial isospectral algebras: models and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("model", help="build a model algebra and write its JSON")
    m.add_argument("name", choices=MODELS)
    m.add_argument("--field", choices=("complex", "prime"), default="complex")
    m.add_argument("--p", type=int)
    m.add_argument("--n", type=int)
    m.add_argument("--d", type=int, help="exponent of a twisted power")
    m.add_argument("--zeta", help="twist: -1, 1, a residue, a complex literal, or eps^k")
    m.add_argument("--base", help="base algebra: f, a2, a3, cn, t")
    m.add_argument("--base2", help="second factor of a direct product")
    m.add_argument("--table", help="JSON table for medial-extension")
    m.add_argument("--zn", type=int, help="use the Z_N table for medial-extension")
    m.add_argument("--scale", type=float, default=0.1, help="noise level for perturbed")
    m.add_argument("--seed", type=int)
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_model)

    i = sub.add_parser("idempotents", help="enumerate nonzero idempotents")
    i.add_argument("algebra")
    i.add_argument("--method", choices=("auto", "closed-form", "newton", "brute"), default="auto")
    i.add_argument("--seed", type=int)
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_idempotents)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("algebra")
    v.add_argument("--idm", help="idempotent set JSON (default: enumerate)")
    v.add_argument("--checks", default="all", help="comma list of " + ", ".join(CHECKS) + ", or all")
    v.add_argument("--sampled", action="store_true", help="accept an incomplete idempotent set")
    v.add_argument("--samples", type=int, default=medial.DEFAULT_SAMPLES)
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quasigroup", help="analyse the idempotent quasigroup")
    q.add_argument("algebra")
    q.add_argument("--idm")
    q.add_argument("--actions", default="table,latin,medial,cyclic,relabel")
    q.add_argument("--format", choices=("json", "text"), default="json")
    q.add_argument("--seed", type=int)
    q.set_defaults(func=cmd_quasigroup)

    z = sub.add_parser("zn", help="the Z_N quasigroup u o v = (u + v)/2")
    z.add_argument("--N", type=int)
    z.add_argument("--orders", type=int, nargs=2, metavar=("X", "Y"))
    z.add_argument("--orbits", type=int, metavar="X")
    z.add_argument("--pset", type=int, metavar="n")
    z.set_defaults(func=cmd_zn)

    s = sub.add_parser("iso", help="test two algebras for isomorphism")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FieldError, NotARoot) as exc:
        sys.stderr.write(f"nonassoc: error: {exc}\n")
        return 2
    except AlgebraError as exc:
        sys.stderr.write(f"nonassoc: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
