"""Command-line interface: ``nilzeta <verb> [options]``.

Every verb builds a :class:`RunReport`.  ``--format json`` prints it as one
JSON document; ``text`` and ``latex`` print the payload alone.  Exit status is
0 on success or PASS, 1 on FAIL, 2 on usage errors and 3 when a resource
guard refuses the request.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from . import __version__
from .analysis import (
    abscissa,
    adjacent_equality_check,
    dominance_check,
    grid_argmax_check,
    square_check,
    verify_funeq,
    verify_funeq_summand,
)
from .lattice import GuardError
from .laurent import fr_series
from .lieoracle import (
    DIRECT_LIMITS,
    CountTable,
    count_ideals_direct,
    count_ideals_pairs,
    stratified_counts,
)
from .qseries import Partition, hall_alpha, hall_alpha_brute
from .zetacore import ZetaParams, enumerate_pairs, local_zeta, local_zeta_latex

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunReport:
    verb: str
    params: Dict[str, Any]
    payload: Any
    passed: bool = True
    text: str = ""
    latex: Optional[str] = None
    duration: float = 0.0
    version: str = __version__

    def as_json(self):
        return {
            "verb": self.verb,
            "params": {k: v for k, v in self.params.items() if v is not None},
            "payload": self.payload,
            "passed": self.passed,
            "duration": round(self.duration, 6),
            "version": self.version,
        }


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.verb} needs --{name.replace('_', '-')}")


def _table_text(p: int, counts: List[int]) -> str:
    width = max(len(f'a_{p}^n'), *(len(str(c)) for c in counts))
    lines = [f"{'n':>3}  {'a_' + str(p) + '^n':>{width}}"]
    lines += [f"{n:>3}  {c:>{width}}" for n, c in enumerate(counts)]
    return "\n".join(lines)


def _series_at(d: int, p: int, N: int) -> List[int]:
    return [c.evaluate(p=p).get(0, 0) for c in fr_series(local_zeta(ZetaParams(d)), N)]


# -- verbs ------------------------------------------------------------------


def cmd_compute(args) -> RunReport:
    _need(args, "d")
    W = local_zeta(ZetaParams(args.d), workers=args.workers)
    text = f"numerator: {W.num}\ndenominator: " + " ".join(
        f"(1 - P^{f.a} T^{f.b})" + (f"^{f.mult}" if f.mult > 1 else "") for f in W.den
    )
    return RunReport("compute", {"d": args.d}, W.to_json(), text=text, latex=local_zeta_latex(ZetaParams(args.d)))


def cmd_series(args) -> RunReport:
    _need(args, "d", "max_exp")
    coeffs = fr_series(local_zeta(ZetaParams(args.d), workers=args.workers), args.max_exp)
    if args.prime is None:
        payload = [str(c) for c in coeffs]
        text = "\n".join(f"{n:>3}  {c}" for n, c in enumerate(coeffs))
    else:
        values = [c.evaluate(p=args.prime).get(0, 0) for c in coeffs]
        payload = CountTable(args.prime, values).as_json()
        text = _table_text(args.prime, values)
    return RunReport("series", {"d": args.d, "p": args.prime, "n": args.max_exp}, payload, text=text)


def cmd_funeq(args) -> RunReport:
    _need(args, "d")
    cert = verify_funeq(args.d, workers=args.workers)
    pairs = enumerate_pairs(ZetaParams(args.d))
    summands = {pair.key: verify_funeq_summand(pair, args.d) for pair in pairs}
    ok = cert.verdict and all(summands.values())
    payload = cert.as_json()
    payload["summands"] = summands
    text = f"{_verdict(ok)} {cert.factor_text}"
    return RunReport("funeq", {"d": args.d}, payload, passed=ok, text=text)


def cmd_abscissa(args) -> RunReport:
    ds = [args.d] if args.d is not None else list(range(2, (args.max_d or 6) + 1))
    rows = {str(d): abscissa(d).as_json() for d in ds}
    lines = [f"d={d}  alpha={r['alpha']}  argmax={r['argmax']}  unique={r['unique']}" for d, r in rows.items()]
    ok = all(r["unique"] for r in rows.values())
    payload = rows[str(args.d)] if args.d is not None else rows
    return RunReport("abscissa", {"d": args.d, "max_d": args.max_d}, payload, passed=ok, text="\n".join(lines))


def cmd_dominance(args) -> RunReport:
    _need(args, "d")
    rep = dominance_check(args.d)
    text = (
        f"{_verdict(rep.passed)} d={args.d} den_max={rep.as_json()['den_max']} "
        f"num_max={rep.as_json()['num_max']} alpha={rep.as_json()['alpha']}"
    )
    return RunReport("dominance", {"d": args.d}, rep.as_json(), passed=rep.passed, text=text)


def cmd_gridmax(args) -> RunReport:
    ds = [args.d] if args.d is not None else list(range(3, (args.max_d or 50) + 1))
    results = {str(d): grid_argmax_check(d) for d in ds}
    failures = [int(d) for d, ok in results.items() if not ok]
    ok = not failures
    text = f"{_verdict(ok)} d in [{ds[0]}, {ds[-1]}]" + (f" failures: {failures}" if failures else "")
    payload = {"checked": [str(d) for d in ds], "failures": [str(d) for d in failures]}
    return RunReport("gridmax", {"d": args.d, "max_d": args.max_d}, payload, passed=ok, text=text)


def cmd_squarecheck(args) -> RunReport:
    top = args.max_d or 1000
    failures = square_check(top)
    cross = min(top, 1000)
    agree = all(adjacent_equality_check(d) == (d not in failures) for d in range(3, cross + 1))
    ok = not failures and agree
    text = f"{_verdict(ok)} d <= {top}: {len(failures)} odd squares; adjacent-equality agreement up to {cross}: {agree}"
    payload = {"max_d": str(top), "failures": [str(d) for d in failures], "adjacent_agrees_up_to": str(cross), "agree": agree}
    return RunReport("squarecheck", {"max_d": top}, payload, passed=ok, text=text)


def _oracle_tables(args) -> Dict[str, CountTable]:
    if args.method == "direct":
        return {"total": count_ideals_direct(args.d, args.prime, args.max_exp, workers=args.workers)}
    if args.method == "pairs":
        return {"total": count_ideals_pairs(args.d, args.prime, args.max_exp, workers=args.workers)}
    return stratified_counts(args.d, args.prime, args.max_exp, workers=args.workers)


def cmd_oracle(args) -> RunReport:
    _need(args, "d", "prime", "max_exp")
    tables = _oracle_tables(args)
    if args.method == "stratified":
        payload = {k: t.as_json() for k, t in tables.items()}
        text = "\n".join(f"{k}: " + " ".join(map(str, t.counts)) for k, t in tables.items())
    else:
        payload = tables["total"].as_json()
        text = _table_text(args.prime, tables["total"].counts)
    params = {"d": args.d, "p": args.prime, "n": args.max_exp, "method": args.method}
    return RunReport("oracle", params, payload, text=text)


def cmd_verify(args) -> RunReport:
    _need(args, "d", "prime", "max_exp")
    method = args.method
    if method == "stratified":
        raise UsageError("verify compares totals; use --method direct or pairs")
    if method is None:
        method = "direct" if args.max_exp <= DIRECT_LIMITS.get(args.d, -1) else "pairs"
    args.method = method
    oracle = _oracle_tables(args)["total"].counts
    series = _series_at(args.d, args.prime, args.max_exp)
    ok = oracle == series
    width = max(6, *(len(str(x)) for x in oracle + series))
    lines = [f"{'n':>3}  {'series':>{width}}  {'oracle':>{width}}"]
    lines += [f"{n:>3}  {s:>{width}}  {o:>{width}}" + ("" if s == o else "  <-") for n, (s, o) in enumerate(zip(series, oracle))]
    lines.append(_verdict(ok))
    payload = {"series": [str(x) for x in series], "oracle": [str(x) for x in oracle], "match": ok}
    params = {"d": args.d, "p": args.prime, "n": args.max_exp, "method": method}
    return RunReport("verify", params, payload, passed=ok, text="\n".join(lines))


def cmd_hall(args) -> RunReport:
    _need(args, "lam", "mu")
    lam, mu = Partition.parse(args.lam), Partition.parse(args.mu)
    poly = hall_alpha(lam, mu)
    payload: Dict[str, Any] = {"lambda": str(lam), "mu": str(mu), "alpha": str(poly)}
    text = f"alpha_({lam})(({mu}); P) = {poly}"
    ok = True
    if args.prime is not None:
        value = poly.evaluate(p=args.prime, t=1)
        brute = hall_alpha_brute(lam, mu, args.prime)
        ok = value == brute
        payload.update({"p": str(args.prime), "value": str(value), "brute": str(brute), "match": ok})
        text += f"\nat p={args.prime}: {value} (enumeration {brute}) {_verdict(ok)}"
    params = {"lambda": str(lam), "mu": str(mu), "p": args.prime}
    return RunReport("hall", params, payload, passed=ok, text=text)


def _partitions(n: int, top: Optional[int] = None):
    top = n if top is None else top
    if n == 0:
        yield ()
        return
    for k in range(min(n, top), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _subpartitions(lam):
    def rec(i, bound):
        if i == len(lam):
            yield ()
            return
        for x in range(min(lam[i], bound), -1, -1):
            for rest in rec(i + 1, x):
                yield (x,) + rest

    for m in rec(0, max(lam, default=0)):
        yield tuple(x for x in m if x)


def _selftest_checks() -> List[tuple]:
    def oracle_d2():
        return all(
            count_ideals_direct(2, p, 6).counts == _series_at(2, p, 6) for p in (2, 3)
        )

    def funeq():
        return all(verify_funeq(d).verdict for d in (2, 3, 4))

    def abscissa_table():
        from fractions import Fraction

        want = {2: 2, 3: 3, 4: 4, 5: Fraction(51, 10), 6: Fraction(99, 13)}
        return all(abscissa(d).alpha == v and abscissa(d).unique for d, v in want.items())

    def hall():
        return all(
            hall_alpha(lam, mu).evaluate(p=p, t=1) == hall_alpha_brute(lam, mu, p)
            for p in (2, 3)
            for n in range(5)
            for lam in _partitions(n)
            for mu in _subpartitions(lam)
        )

    return [
        ("oracle d=2 N<=6", oracle_d2),
        ("funeq d<=4", funeq),
        ("abscissa table", abscissa_table),
        ("hall |lambda|<=4", hall),
    ]


def cmd_selftest(args) -> RunReport:
    results = {}
    for name, check in _selftest_checks():
        results[name] = bool(check())
    ok = all(results.values())
    text = "\n".join(f"{_verdict(v)} {k}" for k, v in results.items())
    return RunReport("selftest", {}, results, passed=ok, text=text)


VERBS: Dict[str, Callable] = {
    "compute": cmd_compute,
    "series": cmd_series,
    "funeq": cmd_funeq,
    "abscissa": cmd_abscissa,
    "dominance": cmd_dominance,
    "gridmax": cmd_gridmax,
    "squarecheck": cmd_squarecheck,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "hall": cmd_hall,
    "selftest": cmd_selftest,
}


# -- plumbing ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilzeta", description="Local normal zeta functions of free class-2 nilpotent groups.")
    parser.add_argument("--version", action="version", version=f"nilzeta {__version__}")
    parser.add_argument("verb", choices=sorted(VERBS))
    parser.add_argument("-d", type=int)
    parser.add_argument("-p", "--prime", type=int)
    parser.add_argument("-n", "--max-exp", type=int)
    parser.add_argument("--format", choices=("json", "latex", "text"), default="text")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--max-d", type=int)
    parser.add_argument("--lambda", dest="lam")
    parser.add_argument("--mu")
    parser.add_argument("--method", choices=("direct", "pairs", "stratified"))
    return parser


def _validate(args):
    if args.d is not None and args.d < 2:
        raise UsageError("-d must be at least 2")
    if args.prime is not None and not is_prime(args.prime):
        raise UsageError(f"{args.prime} is not prime")
    if args.max_exp is not None and args.max_exp < 0:
        raise UsageError("--max-exp must be non-negative")
    if args.max_d is not None and args.max_d < 2:
        raise UsageError("--max-d must be at least 2")
    if args.workers is None:
        env = os.environ.get("NILZETA_WORKERS")
        args.workers = int(env) if env else (os.cpu_count() or 1)
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    if args.verb == "oracle" and args.method is None:
        args.method = "pairs"


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.as_json(), sort_keys=True, ensure_ascii=False)
    if fmt == "latex":
        if report.latex is None:
            raise UsageError(f"no LaTeX rendering for {report.verb}")
        return report.latex
    return report.text


def dispatch(argv: Optional[List[str]] = None) -> tuple:
    """Parse, run and render; returns ``(exit code, stdout text, stderr text)``."""
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        start = time.perf_counter()
        report = VERBS[args.verb](args)
        report.duration = time.perf_counter() - start
        out = render(report, args.format)
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}"
    except GuardError as exc:
        return EXIT_GUARD, "", f"guard: {exc}"
    except ValueError as exc:
        return EXIT_USAGE, "", f"error: {exc}"
    return (EXIT_OK if report.passed else EXIT_FAIL), out, ""


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code, out, err = dispatch(argv)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    if out:
        sys.stdout.write(out + "\n")
    if err:
        sys.stderr.write(err + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
