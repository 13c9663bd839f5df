"""Command-line front end.

Exit codes are a stable contract:
    0  success / verified
    1  bad input (e.g. invalid modulus)
    2  usage error
    3  verification failure
    4  Hadamard assembly or check failure
    5  existence-table mismatch
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import catalog, equivalence, hadamard, sds, search, zmod

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_USAGE = 2
EXIT_VERIFY_FAIL = 3
EXIT_HADAMARD_FAIL = 4
EXIT_TABLE_MISMATCH = 5


def _load_entries():
    return catalog.load_default(verify=True)


def _resolve_families(args_ids, entries=None):
    """Map catalog ids or corpus-format file paths to (label, family)."""
    out = []
    for token in args_ids:
        if "/" in token or token.endswith(".txt"):
            loaded = catalog.load_catalog(open(token).read(), verify=False)
            for e in loaded:
                catalog._materialize(e, {x.id: x for x in loaded})
                out.append((f"{token}:{e.id}", e.family))
        else:
            if entries is None:
                entries = _load_entries()
            e = catalog.entry_by_id(entries, token)
            if e.family is None:
                raise ValueError(f"entry {token} carries no block data")
            out.append((token, e.family))
    return out


def cmd_params(args) -> int:
    try:
        psets = sds.enumerate_P(args.v)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.format == "json":
        print(
            json.dumps(
                [
                    {"v": p.v, "k": list(p.sizes), "lambda": p.lam, "n": p.n}
                    for p in psets
                ]
            )
        )
    else:
        for p in psets:
            print(f"{p}  n={p.n}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        if args.id:
            entries = catalog.load_default(verify=False)
            targets = []
            for eid in args.id:
                e = catalog.entry_by_id(entries, eid)
                targets.append((eid, e))
        else:
            loaded = catalog.load_catalog(open(args.file).read(), verify=False)
            targets = [(e.id, e) for e in loaded]
    except (KeyError, OSError, catalog.CatalogParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    by_id = {e.id: e for _, e in targets}
    status = EXIT_OK
    for label, e in targets:
        if e.status != "verified":
            print(f"{label}: SKIP (status {e.status}, no data)")
            continue
        try:
            catalog._materialize(e, by_id)
        except catalog.CatalogIntegrityError as exc:
            print(f"{label}: FAIL ({exc})")
            status = EXIT_VERIFY_FAIL
            continue
        lam = args.lam if args.lam is not None else e.params.lam
        report = sds.verify_sds(e.family, lam)
        if report.ok:
            print(f"{label}: PASS lambda={lam}")
        else:
            hist = sorted(set(report.histogram[1:]))
            print(
                f"{label}: FAIL lambda={lam} worst deviation "
                f"{report.worst_deviation}, count values {hist}"
            )
            status = EXIT_VERIFY_FAIL
    return status


def cmd_search(args) -> int:
    sizes = tuple(int(t) for t in args.sizes.split(","))
    seed = args.seed
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
        print(f"seed: {seed} (pass --seed {seed} to reproduce)")
    try:
        if args.skew_gs:
            sels = search.search_skew_gs(
                args.v, sizes, args.q, budget=args.budget, seed=seed,
                workers=args.workers, want=args.want,
            )
            lam = sum(sizes) - args.v
        else:
            lam = sds.derive_lambda(args.v, sizes)
            if lam is None:
                print("error: sizes admit no integral lambda", file=sys.stderr)
                return EXIT_BAD_INPUT
            p = sds.ParameterSet(args.v, sizes, lam)
            sels = search.search_sds(
                p, args.q, budget=args.budget, seed=seed,
                workers=args.workers, want=args.want,
            )
    except search.InfeasibleError as exc:
        print("infeasible for the orbit method:")
        for r in exc.reasons:
            print(f"  {r}")
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if not sels:
        print("no family found within budget (not a nonexistence proof)")
        return EXIT_OK
    entries = []
    for i, sel in enumerate(sels, start=1):
        eid = f"found-{args.v}-q{args.q}-s{seed}-{i}"
        entries.append(
            catalog.CatalogEntry(
                id=eid,
                params=sds.ParameterSet(args.v, sizes, lam),
                status="verified",
                provenance=f"search v={args.v} q={args.q} seed={seed}",
                orbit=(sel.orbsys.h, sel.orbsys.q, sel.reps_per_block),
            )
        )
        print(f"found {eid}: reps {sel.reps_per_block}")
    text = catalog.emit_catalog(entries)
    if args.out:
        with open(args.out, "a") as fh:
            fh.write(text)
        print(f"appended {len(entries)} entries to {args.out}")
    return EXIT_OK


def cmd_hadamard(args) -> int:
    try:
        fams = _resolve_families(args.id or [args.file])
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    status = EXIT_OK
    for label, fam in fams:
        if args.paley_todd:
            fam = sds.compose_with_paley_todd(fam)
        if len(fam.blocks) != 4:
            print(f"{label}: FAIL (need 4 blocks, have {len(fam.blocks)})")
            status = EXIT_HADAMARD_FAIL
            continue
        try:
            m = hadamard.build_skew_hadamard(fam.v, *fam.blocks)
        except hadamard.BuildError as exc:
            print(f"{label}: FAIL ({exc})")
            status = EXIT_HADAMARD_FAIL
            continue
        print(f"{label}: PASS skew-Hadamard of order {m.n}")
        if args.out:
            hadamard.write_matrix(m, args.out)
            print(f"wrote {args.out}")
    return status


def cmd_equiv(args) -> int:
    try:
        fams = _resolve_families(args.ids)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    forms = [(label, equivalence.canonical_form(f)) for label, f in fams]
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            verdict = (
                "EQUIVALENT" if forms[i][1] == forms[j][1] else "NONEQUIVALENT"
            )
            print(f"{forms[i][0]} vs {forms[j][0]}: {verdict}")
    return EXIT_OK


def cmd_table1(args) -> int:
    entries = _load_entries()
    rows = catalog.table1_report(entries)
    if args.format == "json":
        print(
            json.dumps(
                [
                    {
                        "v": r.v,
                        "k": list(r.sizes),
                        "lambda": r.lam,
                        "status": r.status,
                        "source": r.source,
                    }
                    for r in rows
                ]
            )
        )
    else:
        for r in rows:
            extra = " (external)" if r.source == "external" else ""
            print(
                f"v={r.v:>3}  k={r.sizes[0]},{r.sizes[1]},{r.sizes[2]}"
                f"  lambda={r.lam:>3}  {r.status}{extra}"
            )
    if not catalog.table1_matches_expected(rows):
        got = {(r.v, *r.sizes, r.lam): r.status for r in rows}
        for exp in catalog.EXPECTED_TABLE1:
            key, want = exp[:5], exp[5]
            if got.get(key) != want:
                print(f"MISMATCH {key}: expected {want}, got {got.get(key)}")
        return EXIT_TABLE_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sdskit",
        description="Cyclic difference families and skew-Hadamard matrices",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="enumerate 3-block parameter sets for v")
    p.add_argument("v", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("verify", help="verify catalog entries or a corpus file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--id", action="append", help="catalog entry id (repeatable)")
    g.add_argument("--file", help="corpus-format file to verify")
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="orbit-union search for a family")
    p.add_argument("v", type=int)
    p.add_argument("sizes", help="comma-separated block sizes")
    p.add_argument("--q", type=int, required=True, help="prime orbit order")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--want", type=int, default=1)
    p.add_argument("--skew-gs", action="store_true", help="4-block skew search")
    p.add_argument("--out", help="append found families to this corpus file")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("hadamard", help="assemble and check a skew-Hadamard matrix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--id", action="append", help="catalog entry id (repeatable)")
    g.add_argument("--file", help="corpus-format file")
    p.add_argument("--paley-todd", action="store_true",
                   help="prepend the quadratic-residue block first")
    p.add_argument("--out", help="matrix output file")
    p.set_defaults(func=cmd_hadamard)

    p = sub.add_parser("equiv", help="pairwise equivalence of families")
    p.add_argument("ids", nargs="+", help="catalog ids or corpus files")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("table1", help="reproduce the existence summary table")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_table1)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
