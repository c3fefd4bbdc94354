"""seqspectra command line.

    seqspectra <field-info|vdist|family|code-weights|verify> --p P --n N --k K
               [--format json|csv] [--threads T|max] [--cap C] [--out PATH]

Exit status: 0 success, 2 invalid input, 3 verification mismatch.
Counts and other potentially large integers are written as decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import gcd

import numpy as np

from . import __version__, code, expsum, seqfam, verify
from .charsum import QuadValue
from .errors import CapExceeded, InvalidParams
from .gf import DEFAULT_CAP, FieldCtx, build_field

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 2, 3

VDIST_HEADER = ["twoA", "twoB", "re", "im", "count_bruteforce", "count_closedform", "match"]
FAMILY_HEADER = ["twoA", "twoB", "re", "im", "count", "normSquaredTimes4"]
WEIGHT_HEADER = ["weight", "count_distribution", "count_closedform", "match"]
VERIFY_HEADER = ["name", "passed", "mode", "detail"]


class _UsageError(Exception):
    pass


def _threads(text: str) -> int:
    if text == "max":
        return expsum.default_threads()
    try:
        t = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'max', got {text!r}")
    if t < 1:
        raise argparse.ArgumentTypeError(f"thread count must be positive, got {t}")
    return t


def _fmt_float(x: float) -> str:
    x = 0.0 if x == 0 else x  # no "-0"
    return f"{x:.12g}"


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _value_cols(v: QuadValue) -> dict:
    z = v.to_complex()
    return {"twoA": str(v.two_a), "twoB": str(v.two_b), "re": _fmt_float(z.real), "im": _fmt_float(z.imag)}


def _params(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "n": ctx.n, "k": ctx.k, "d": str(ctx.d), "N": str(ctx.N)}


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands: each returns (payload for json, csv text, exit status) --------------

def cmd_field_info(ctx: FieldCtx, args) -> tuple[dict, str, int]:
    g = gcd(ctx.d, ctx.N)
    cong = (ctx.d * (ctx.p**ctx.k + 1)) % ctx.N
    out = {
        "p": ctx.p, "n": ctx.n, "k": ctx.k, "e": ctx.e,
        "d": str(ctx.d), "N": str(ctx.N),
        "modulus": list(ctx.modulus),
        "alpha": str(ctx.alpha),
        "checks": {
            "gcdDN": str(g),
            "gcdIsTwo": g == 2,
            "dTimesPkPlus1ModN": str(cong),
            "congruenceHolds": cong == 2 % ctx.N,
        },
    }
    rows = [[key, out[key]] for key in ("p", "n", "k", "e", "d", "N")]
    rows.append(["modulus", " ".join(map(str, ctx.modulus))])
    rows.append(["alpha", ctx.alpha])
    rows += [[key, _bool(v) if isinstance(v, bool) else v] for key, v in out["checks"].items()]
    return out, _csv(["key", "value"], rows), EXIT_OK


def cmd_vdist(ctx: FieldCtx, args) -> tuple[dict, str, int]:
    bf = expsum.value_distribution_bruteforce(ctx, args.threads)
    cf = expsum.closed_form_distribution(ctx)
    keys = sorted(set(expsum.candidate_values(ctx)) | set(bf) | set(cf), key=lambda v: (v.two_a, v.two_b))
    rows, ok = [], True
    for v in keys:
        a, b = bf.get(v, 0), cf.get(v, 0)
        ok &= a == b
        rows.append({**_value_cols(v), "countBruteforce": str(a), "countClosedform": str(b), "match": a == b})
    moments = expsum.moment_checks(bf, ctx)
    ok &= all(moments.values())
    out = {"params": _params(ctx), "rows": rows, "moments": moments, "allMatch": ok}
    text = _csv(VDIST_HEADER, [[*(r[c] for c in ("twoA", "twoB", "re", "im", "countBruteforce", "countClosedform")),
                                _bool(r["match"])] for r in rows])
    return out, text, EXIT_OK if ok else EXIT_MISMATCH


def _msequence_all_minus_one(ctx: FieldCtx) -> bool:
    """Direct check that s_0 has C(tau) = -1 at every tau != 0.

    C(tau) = -1 exactly when each nonzero difference occurs p^(n-1) times and
    zero occurs p^(n-1) - 1 times.
    """
    u, N, p = ctx.tr1_exp, ctx.N, ctx.p
    want = np.full(p, ctx.q // p, dtype=np.int64)
    want[0] -= 1
    t = np.arange(N, dtype=np.int64)
    step = max(1, (1 << 21) // N)
    for s in range(1, N, step):
        taus = np.arange(s, min(s + step, N), dtype=np.int64)
        diff = (u[(taus[:, None] + t[None, :]) % N] - u[None, :]) % p
        diff += (np.arange(len(taus), dtype=np.int64) * p)[:, None]
        counts = np.bincount(diff.ravel(), minlength=len(taus) * p).reshape(len(taus), p)
        if not np.array_equal(counts, np.broadcast_to(want, counts.shape)):
            return False
    return True


def cmd_family(ctx: FieldCtx, args) -> tuple[dict, str, int]:
    spec = seqfam.family_spectrum(ctx, args.scope, args.threads)
    if not spec:
        raise _UsageError(f"scope {args.scope!r} selects no correlations")
    bound = seqfam.family_bound_times4(ctx)
    mx = seqfam.max_norm4(spec)
    rows = [{**_value_cols(v), "count": str(c), "normSquaredTimes4": str(v.norm4())}
            for v, c in sorted(spec.items(), key=lambda kv: (kv[0].two_a, kv[0].two_b))]
    mseq = _msequence_all_minus_one(ctx)
    ok = mx <= bound and mseq
    out = {
        "params": _params(ctx),
        "scope": args.scope,
        "rows": rows,
        "boundSquaredTimes4": str(bound),
        "maxObservedSquaredTimes4": str(mx),
        "withinBound": mx <= bound,
        "mSequenceOutOfPhaseAllMinusOne": mseq,
    }
    text = _csv(FAMILY_HEADER, [[r[c] for c in FAMILY_HEADER] for r in rows])
    return out, text, EXIT_OK if ok else EXIT_MISMATCH


def cmd_code_weights(ctx: FieldCtx, args) -> tuple[dict, str, int]:
    wd = code.weight_distribution(ctx, args.threads)
    cf = code.weight_distribution_closed(ctx)
    rows, ok = [], True
    for w in sorted(set(wd) | set(cf)):
        a, b = wd.get(w, 0), cf.get(w, 0)
        ok &= a == b
        rows.append({"weight": str(w), "countDistribution": str(a), "countClosedform": str(b), "match": a == b})
    total = sum(wd.values())
    ok &= total == ctx.q**2
    out = {"params": _params(ctx), "length": str(ctx.N), "rows": rows, "total": str(total), "allMatch": ok}
    text = _csv(WEIGHT_HEADER, [[r["weight"], r["countDistribution"], r["countClosedform"], _bool(r["match"])]
                                for r in rows])
    return out, text, EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(ctx: FieldCtx, args) -> tuple[dict, str, int]:
    rep = verify.run(ctx, samples=args.samples, seed=args.seed, threads=args.threads)
    text = _csv(VERIFY_HEADER, [[c.name, _bool(c.passed), c.mode, c.detail] for c in rep.checks])
    return rep.to_json(), text, EXIT_OK if rep.passed else EXIT_MISMATCH


COMMANDS = {
    "field-info": cmd_field_info,
    "vdist": cmd_vdist,
    "family": cmd_family,
    "code-weights": cmd_code_weights,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="characteristic, p = 3 mod 4")
    common.add_argument("--n", type=int, required=True, help="odd extension degree")
    common.add_argument("--k", type=int, required=True, help="divisor of n")
    common.add_argument("--d", type=int, default=None, help="decimation to validate (default: derived)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=_threads, default=None, help="worker threads or 'max' (default)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest p^n to tabulate")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    ap = argparse.ArgumentParser(prog="seqspectra", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("field-info", parents=[common], help="field parameters and validity checks")
    sub.add_parser("vdist", parents=[common], help="value distribution of S(a, b)")
    fam = sub.add_parser("family", parents=[common], help="correlation spectrum of the family")
    fam.add_argument("--scope", choices=seqfam.SCOPES, default="all-shifts")
    sub.add_parser("code-weights", parents=[common], help="weight distribution of the cyclic code")
    ver = sub.add_parser("verify", parents=[common], help="run the full property suite")
    ver.add_argument("--samples", type=int, default=10_000, help="pairs for sampled checks")
    ver.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)  # argparse exits with 2 on bad usage
    if args.threads is None:
        args.threads = expsum.default_threads()
    try:
        ctx = build_field(args.p, args.n, args.k, cap=args.cap, d=args.d)
        payload, text, status = COMMANDS[args.command](ctx, args)
    except (InvalidParams, CapExceeded, _UsageError) as exc:
        print(f"seqspectra: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "json":
        text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
