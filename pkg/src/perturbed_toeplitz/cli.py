"""Command-line front end: ``spectrum``, ``table`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, NonFiniteError, RegimeError, SolverError, ToeplitzError
from .oracle import oracle_eigenvalues
from .precision import DEFAULT_BITS, FAST_BITS, PrecisionContext
from .spectrum import METHODS, eigenpairs, full_spectrum
from .strong import extreme_asymptotic_error
from .toeplitz import DENSE_LIMIT, PerturbationParams, Regime, g
from .weak import EtaFunction, eta

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
TABLE_HEADER = ["n", "R_inf", "n3_R_inf", "extreme_scaled_first", "extreme_scaled_last", "methods"]
VERIFY_TOLERANCE = 2e-13
VERIFY_DEFAULT_N = 50


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha_re: str = "0"
    alpha_im: str = "0"
    n_list: list = field(default_factory=list)
    precision_bits: int = DEFAULT_BITS
    method: str = "auto"
    output_format: str = "csv"
    output_path: str | None = None
    with_vectors: bool = False
    plot_data_path: str | None = None

    def alpha(self) -> tuple[Fraction, Fraction]:
        try:
            return Fraction(self.alpha_re), Fraction(self.alpha_im)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"alpha must be given as decimal numbers: {exc}") from None

    def validate(self) -> "RunConfig":
        self.alpha()
        if not self.n_list:
            raise UsageError("no matrix size given")
        if any(n < 3 for n in self.n_list):
            raise UsageError(f"every n must be >= 3, got {self.n_list}")
        if self.precision_bits < FAST_BITS:
            raise UsageError(f"precision must be at least {FAST_BITS} bits, got {self.precision_bits}")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")
        return self

    def params(self, n: int) -> PerturbationParams:
        return PerturbationParams.create(self.alpha(), n, PrecisionContext(self.precision_bits))


@dataclass(frozen=True)
class ErrorTableRow:
    n: int
    max_abs_error: object          # R_inf
    scaled: object                 # n^3 R_inf
    extreme_scaled_first: object   # |alpha|^n |R_1|, strong regime only
    extreme_scaled_last: object    # |alpha|^n |R_n|
    methods: str

    def as_strings(self) -> dict:
        def fmt(x, spec):
            return "" if x is None else format(float(x), spec)
        return {
            "n": str(self.n),
            "R_inf": fmt(self.max_abs_error, ".2e"),
            "n3_R_inf": fmt(self.scaled, ".2f"),
            "extreme_scaled_first": fmt(self.extreme_scaled_first, ".3g"),
            "extreme_scaled_last": fmt(self.extreme_scaled_last, ".3g"),
            "methods": self.methods,
        }


def _method_summary(spec) -> str:
    tags = sorted(set(spec.methods))
    return "+".join(tags + list(spec.notes))


def compute_table_row(alpha_re: str, alpha_im: str, n: int, bits: int, method: str = "auto") -> ErrorTableRow:
    """R_{n,j} = lambda^asympt_j - lambda^fp_j summarized for one n."""
    p = PerturbationParams.create((Fraction(alpha_re), Fraction(alpha_im)), n, PrecisionContext(bits))
    fp = full_spectrum(p, method)
    asy = full_spectrum(p, "asymptotic")
    r = [a - b for a, b in zip(asy.eigenvalues, fp.eigenvalues)]
    r_inf = max(abs(x) for x in r)
    first = last = None
    if p.regime is Regime.STRONG:
        # |R_1| ~ |alpha|^-n underflows the absolute resolution of lambda_1;
        # use the relative-precision offset whenever the solver provides it.
        lo, hi = fp.thetas[0], fp.thetas[-1]
        r_first = r[0] if lo.offset is None else extreme_asymptotic_error(p, "first", lo.offset)
        r_last = r[-1] if hi.offset is None else extreme_asymptotic_error(p, "last", hi.offset)
        scale = p.ctx.exp(n * p.log_abs)
        first, last = scale * abs(r_first), scale * abs(r_last)
    return ErrorTableRow(n, r_inf, r_inf * n ** 3, first, last, _method_summary(fp))


def _table_rows(cfg: RunConfig) -> list:
    args = [(cfg.alpha_re, cfg.alpha_im, n, cfg.precision_bits, cfg.method) for n in sorted(cfg.n_list)]
    workers = min(len(args), os.cpu_count() or 1)
    if workers <= 1:
        return [compute_table_row(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(compute_table_row, *a) for a in args]
        return [f.result() for f in futures]


def _write(cfg: RunConfig, text: str, stdout):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _render(cfg: RunConfig, header: list, rows: list, meta: dict) -> str:
    if cfg.output_format == "json":
        return json.dumps({**meta, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _write_plot_data(path: str, series: list):
    """series: (name, x, y) triples, written as a long-format CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["series", "x", "y"])
        for name, x, y in series:
            w.writerow([name, x, y])


def _eta_curves(p: PerturbationParams, samples: int = 200) -> list:
    if p.regime in (Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS):
        return []
    c = p.ctx
    out = []
    for parity in ("odd", "even"):
        e = EtaFunction(p, parity)
        for i in range(1, samples):
            x = i * c.pi / samples
            out.append((f"eta_{parity}", repr(float(x)), repr(float(eta(e, x)))))
    return out


def cmd_spectrum(cfg: RunConfig, stdout=sys.stdout) -> int:
    if len(cfg.n_list) != 1:
        raise UsageError("spectrum takes a single --n")
    p = cfg.params(cfg.n_list[0])
    c = p.ctx
    spec = full_spectrum(p, cfg.method)
    pairs = eigenpairs(spec) if cfg.with_vectors else [None] * p.n
    mult = spec.multiplicities()
    header = ["j", "theta", "branch", "eigenvalue", "method", "loc_lower", "loc_upper", "multiplicity"]
    if cfg.with_vectors:
        header.append("residual")
    rows = []
    for idx, (lam, sol) in enumerate(zip(spec.eigenvalues, spec.thetas)):
        j = idx + 1
        row = {
            "j": str(j),
            "theta": c.to_str(sol.theta),
            "branch": sol.branch,
            "eigenvalue": c.to_str(lam),
            "method": spec.methods[idx],
            "loc_lower": c.to_str(g((j - 1) * c.pi / p.n, c)),
            "loc_upper": c.to_str(g(j * c.pi / p.n, c)),
            "multiplicity": str(mult[idx]),
        }
        if cfg.with_vectors:
            pair = pairs[idx]
            row["residual"] = "" if pair is None else c.to_str(pair.residual)
            if cfg.output_format == "json" and pair is not None:
                row["vector"] = [[c.to_str(z.real), c.to_str(z.imag)] for z in pair.vector]
        rows.append(row)
    meta = {"alpha_re": cfg.alpha_re, "alpha_im": cfg.alpha_im, "n": p.n, "precision_bits": c.mantissa_bits,
            "regime": p.regime.value, "localization_certified": spec.localization_certified}
    _write(cfg, _render(cfg, header, rows, meta), stdout)
    if cfg.plot_data_path:
        series = _eta_curves(p)
        series += [("theta_lambda", repr(float(s.theta)), repr(float(v)))
                   for s, v in zip(spec.thetas, spec.eigenvalues)]
        _write_plot_data(cfg.plot_data_path, series)
    return EXIT_OK


def cmd_table(cfg: RunConfig, stdout=sys.stdout) -> int:
    if cfg.method == "asymptotic":
        raise UsageError("table compares the asymptotic values against a solver; pick another --method")
    cfg.params(min(cfg.n_list))   # fail early on a bad alpha
    rows = _table_rows(cfg)
    meta = {"alpha_re": cfg.alpha_re, "alpha_im": cfg.alpha_im, "precision_bits": cfg.precision_bits}
    out = [r.as_strings() for r in rows]
    if cfg.output_format == "json":
        for r in out:
            r["n"] = int(r["n"])
    _write(cfg, _render(cfg, TABLE_HEADER, out, meta), stdout)
    if cfg.plot_data_path:
        series = [("R_inf", str(r.n), repr(float(r.max_abs_error))) for r in rows]
        series += [("n3_R_inf", str(r.n), repr(float(r.scaled))) for r in rows]
        _write_plot_data(cfg.plot_data_path, series)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, stdout=sys.stdout) -> int:
    if len(cfg.n_list) != 1:
        raise UsageError("verify takes a single --n")
    n = cfg.n_list[0]
    if n > DENSE_LIMIT:
        raise UsageError(f"verify needs n <= {DENSE_LIMIT}")
    p = cfg.params(n)
    c = p.ctx
    spec = full_spectrum(p, cfg.method)
    ref = oracle_eigenvalues(p, FAST_BITS).eigenvalues
    diffs = [abs(float(a) - b) for a, b in zip(spec.eigenvalues, ref)]
    worst_lam = max(range(n), key=diffs.__getitem__)
    pairs = [(i, pr) for i, pr in enumerate(eigenpairs(spec)) if pr is not None]
    res_tol = c.two_pow(-c.mantissa_bits / 2)
    worst_res, max_res = None, None
    if pairs:
        worst_res, pr = max(pairs, key=lambda t: t[1].residual)
        max_res = pr.residual

    ours = spec.multiplicities()
    ref_mult = [sum(1 for w in ref if abs(w - v) <= 1e-9) for v in ref]
    ok_lam = diffs[worst_lam] < VERIFY_TOLERANCE
    ok_res = max_res is None or max_res < res_tol
    ok_mult = ours == ref_mult

    lines = [
        f"regime: {p.regime.value}",
        f"n: {n}",
        f"precision_bits: {c.mantissa_bits}",
        f"max_abs_eigenvalue_diff: {diffs[worst_lam]:.3e} (j={worst_lam + 1}, tolerance {VERIFY_TOLERANCE:.0e})",
    ]
    if max_res is None:
        lines.append("max_residual: n/a (no theta-solved eigenvalues)")
    else:
        lines.append(f"max_residual: {_exp10(max_res, c)} "
                     f"(j={worst_res + 1}, tolerance 2^-{c.mantissa_bits // 2})")
    lines.append(f"multiplicities: {','.join(map(str, ours))}"
                 + ("" if ok_mult else f" (oracle: {','.join(map(str, ref_mult))})"))
    lines.append(f"identities: {'ok' if spec.identities_hold() else 'FAILED'}")
    passed = ok_lam and ok_res and ok_mult
    lines.append("PASS" if passed else "FAIL")
    stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_VERIFY


def _exp10(x, ctx: PrecisionContext) -> str:
    """x as a short decimal string that survives exponents beyond float range."""
    if x == 0:
        return "0"
    return ctx._m.nstr(x, 3)


def _int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perturbed-toeplitz",
                                     description="Eigenvalues of the corner-perturbed tridiagonal Toeplitz matrix.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("spectrum", "all eigenvalues for one n"),
                            ("table", "asymptotic-expansion error table over several n"),
                            ("verify", "solver vs Jacobi oracle and eigenvector residuals")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--alpha-re", default="0")
        sp.add_argument("--alpha-im", default="0")
        sp.add_argument("--n", type=int)
        sp.add_argument("--n-list", type=_int_list)
        sp.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
        sp.add_argument("--method", choices=METHODS, default="auto")
        sp.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output")
        sp.add_argument("--with-vectors", action="store_true")
        sp.add_argument("--emit-plot-data", metavar="PATH")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    n_list = list(args.n_list or [])
    if args.n is not None:
        n_list.insert(0, args.n)
    if not n_list and args.command == "verify":
        n_list = [VERIFY_DEFAULT_N]
    return RunConfig(args.alpha_re, args.alpha_im, n_list, args.precision_bits, args.method,
                     args.output_format, args.output, args.with_vectors, args.emit_plot_data).validate()


COMMANDS = {"spectrum": cmd_spectrum, "table": cmd_table, "verify": cmd_verify}


def _solver_message(cfg: RunConfig | None, exc: Exception) -> str:
    if cfg is None:
        return f"solver failure: {exc}"
    try:
        p = cfg.params(max(cfg.n_list))
        n1 = "n/a" if p.n1_threshold is None else f"{float(p.n1_threshold):.4g}"
        n2 = "n/a" if p.n2_threshold is None else f"{float(p.n2_threshold):.4g}"
        return f"solver failure (regime {p.regime.value}, N1={n1}, N2={n2}): {exc}"
    except ToeplitzError:
        return f"solver failure: {exc}"


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = None
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, RegimeError, NonFiniteError, DomainError) as exc:
        print(f"error: {_solver_message(cfg, exc)}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
