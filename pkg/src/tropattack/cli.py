"""Command line interface: ``tropattack <command> ...``.

Errors go to stderr as one JSON object ``{"code": ..., "message": ...}``.
Node indices shown to the user are 1-based.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .attack import recover_key
from .csr import build_csr_from_cycle, csr_term
from .disclog import DisclogInstance, solve_disclog
from .errors import TropError
from .expgen import (
    GenKind,
    gen_uniform_matrix,
    make_rng,
    run_disclog_trials,
    run_trials,
    secret_range,
    special_parts,
    write_csv,
)
from .io import FORMATS, dumps, read_matrix, scalar_out, write_matrix
from .protocol import ProtocolInstance, run_protocol
from .scalar import format_scalar
from .spectral import find_critical_cycle, max_cycle_mean

SEED_ENV = "TROPATTACK_SEED"
U64 = 2**64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _seed(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def _emit(out, fields: dict) -> None:
    for k, v in fields.items():
        out.write(f"{k}: {v}\n")


def _write(M, path, fmt, out) -> None:
    if path in (None, "-"):
        out.write(dumps(M, fmt))
    else:
        write_matrix(M, path, fmt)


def cmd_protocol(args, out) -> int:
    M, H = read_matrix(args.M), read_matrix(args.H)
    rng = make_rng(args.seed)
    lo, hi = secret_range(M.rows)
    m = args.m if args.m is not None else int(rng.integers(lo, hi, endpoint=True))
    n = args.n if args.n is not None else int(rng.integers(lo, hi, endpoint=True))
    tr = run_protocol(ProtocolInstance(M, H, m, n))
    ext = args.format
    os.makedirs(args.out_dir, exist_ok=True)
    paths = {}
    for name, mat in (("A", tr.A), ("B", tr.B), ("K", tr.K_a)):
        paths[name] = os.path.join(args.out_dir, f"{name}.{ext}")
        write_matrix(mat, paths[name], ext)
    _emit(out, {"m": m, "n": n, **{f"{k} written to": v for k, v in paths.items()}})
    return 0


def cmd_attack(args, out) -> int:
    M, H = read_matrix(args.M), read_matrix(args.H)
    A, B = read_matrix(args.A), read_matrix(args.B)
    res = recover_key(M, H, A, B, light=args.light, recover_both=args.both)
    _emit(out, {
        "branch": res.branch.value,
        "lambda(H)": format_scalar(res.lambda_H),
        "m": res.m_recovered if res.m_recovered is not None else "-",
        "n": res.n_recovered if res.n_recovered is not None else "-",
        "elapsed_ms": f"{res.elapsed * 1e3:.3f}",
    })
    if args.out == "-":
        out.write(dumps(res.key, args.format))
    else:
        write_matrix(res.key, args.out, args.format)
        _emit(out, {"key written to": args.out})
    return 0


def cmd_disclog(args, out) -> int:
    inst = DisclogInstance(read_matrix(args.A), read_matrix(args.V), read_matrix(args.F))
    res = solve_disclog(
        inst,
        light=args.light,
        monotone_accel=args.monotone,
        full_verify=not args.no_verify,
        catch_small=not args.skip_small,
    )
    lam = max_cycle_mean(inst.F)
    fields = {"t": res.t, "branch": res.branch.value, "lambda(F)": format_scalar(lam)}
    if res.mu is not None:
        fields["mu"] = format_scalar(res.mu)
        fields["critical cycle"] = str(find_critical_cycle(inst.F, lam))
    fields["verified"] = "yes" if res.verified else "no"
    _emit(out, fields)
    return 0


def cmd_gen(args, out) -> int:
    rng = make_rng(args.seed, args.d)
    if args.kind == GenKind.RANDOM_FINITE.value:
        M = gen_uniform_matrix(args.d, tuple(args.range), rng)
    else:
        M = special_parts(args.d, rng).H
    _write(M, args.out, args.format, out)
    return 0


def cmd_bench(args, out) -> int:
    kinds = [k.value for k in GenKind] if args.kind == "both" else [args.kind]
    runner = run_trials if args.mode == "attack" else run_disclog_trials
    records, summary = [], []
    for kind in kinds:
        r, s = runner(args.dims, args.trials, kind, args.seed, jobs=args.jobs, archive_dir=args.archive_dir)
        records += r
        summary += s
    if records and args.records:
        write_csv(records, args.records if args.records != "-" else out)
    if summary:
        write_csv(summary, args.summary if args.summary != "-" else out)
    failed = sum(not r.success for r in records)
    return 1 if failed else 0


def selftest_checks():
    """Yield ``(name, ok)`` for the two worked instances."""
    from . import golden as g
    from .attack import AttackBranch

    for label, case in (("kleene-case", g.KLEENE_CASE), ("disclog-case", g.DISCLOG_CASE)):
        tr = run_protocol(ProtocolInstance(case.M, case.H, case.m, case.n))
        yield f"{label} protocol messages", tr.A == case.A and tr.B == case.B
        yield f"{label} shared key", tr.K_a == case.K and tr.K_b == case.K
        res = recover_key(case.M, case.H, tr.A, tr.B)
        yield f"{label} attack key", res.key == case.K
        if case is g.KLEENE_CASE:
            yield f"{label} attack branch", res.branch is AttackBranch.EASY_KLEENE
        else:
            yield f"{label} attack exponent", res.branch is AttackBranch.DISCLOG and res.m_recovered == case.m
    F, V = g.DISCLOG_F, g.DISCLOG_V
    csr = build_csr_from_cycle(F, g.DISCLOG_CYCLE)
    yield "disclog-case cycle matrix", csr.S == g.DISCLOG_S
    yield "disclog-case constant term", all(
        csr_term(csr, k) == g.DISCLOG_CSR_CONSTANT for k in range(csr.period)
    )
    d = solve_disclog(DisclogInstance(g.DISCLOG_CASE.A, V, F))
    yield "disclog-case offset", d.t == g.DISCLOG_CASE.m - 2 and d.mu == g.DISCLOG_MU


def cmd_selftest(args, out) -> int:
    bad = 0
    for name, ok in selftest_checks():
        out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
        bad += not ok
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None,
                        help=f"u64 seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--format", choices=FORMATS, default="json", help="matrix output format")
    common.add_argument("--light", action="store_true", help="check one cycle column in the disclog")
    common.add_argument("--no-verify", action="store_true", help="skip the final V ⊗ F^t = A check")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = _Parser(prog="tropattack", description="Max-plus key exchange: simulate, attack, benchmark.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("protocol", parents=[common], help="run the key exchange")
    s.add_argument("--M", required=True)
    s.add_argument("--H", required=True)
    s.add_argument("--m", type=int, help="Alice's exponent (default: random in [(d-1)^2+1, d^2])")
    s.add_argument("--n", type=int, help="Bob's exponent (default: random)")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_protocol)

    s = sub.add_parser("attack", parents=[common], help="recover the key from public data")
    for name in ("M", "H", "A", "B"):
        s.add_argument(f"--{name}", required=True)
    s.add_argument("--both", action="store_true", help="recover both exponents")
    s.add_argument("--out", default="K.json", help="key output file ('-' for stdout)")
    s.set_defaults(func=cmd_attack)

    s = sub.add_parser("disclog", parents=[common], help="solve A = V ⊗ F^t for t")
    for name in ("A", "V", "F"):
        s.add_argument(f"--{name}", required=True)
    s.add_argument("--monotone", action="store_true", help="binary search for small t (needs F >= I)")
    s.add_argument("--skip-small", action="store_true", help="skip the scan over t <= (d-1)^2")
    s.set_defaults(func=cmd_disclog)

    s = sub.add_parser("gen", parents=[common], help="generate a random matrix")
    s.add_argument("kind", choices=[k.value for k in GenKind])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--range", type=int, nargs=2, default=[-100, 100], metavar=("LO", "HI"))
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", parents=[common], help="batch success-rate and timing run")
    s.add_argument("--dims", type=int, nargs="+", default=[10, 20])
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--kind", choices=[k.value for k in GenKind] + ["both"], default="both")
    s.add_argument("--mode", choices=["attack", "disclog"], default="attack")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--records", default=None, help="per-trial CSV ('-' for stdout)")
    s.add_argument("--summary", default="-", help="summary CSV ('-' for stdout)")
    s.add_argument("--archive-dir", default=None, help="save failing instances here")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", parents=[common], help="check the built-in worked instances")
    s.set_defaults(func=cmd_selftest)
    return p


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message}) + "\n")
    return status


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
    except UsageError as exc:
        return _fail("usage", str(exc), 2)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except TropError as exc:
        msg = str(exc)
        diag = getattr(exc, "diagnostics", None)
        if diag:
            msg = f"{msg} {json.dumps(diag, default=scalar_out)}"
        return _fail(exc.code, msg, 1)
    except OverflowError as exc:
        return _fail("overflow", str(exc), 1)
    except OSError as exc:
        return _fail("io", f"{exc.strerror or exc}: {exc.filename}" if exc.filename else str(exc), 1)


cli_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
