"""Command-line front end: transforms, certificates and the named experiments.

Every subcommand exits with status 0 iff all certificates it ran passed.
"""

from __future__ import annotations

import argparse
import io
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import oracles as orc
from . import revolution as rev
from .errors import ContractError, DomainError, ParseError
from .transforms import (
    TRANSFORM_NAMES,
    TransformCatalog,
    fourier_multiplier,
    operator_csv,
    verify_fourier_factorization,
)
from .zonal import dumps_profile, loads_profile

FACTORIZATION_PAIRS = ((3, 1), (4, 2), (5, 2), (5, 3), (6, 3))


@dataclass
class ExperimentConfig:
    name: str
    n: int | None = None
    j: int | None = None
    K: int = 16
    lambda_min: float | None = None
    lambda_max: float | None = None
    steps: int | None = None
    samples: int = 1000
    seed: int = 0
    tol: float | None = None
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        if self.n is not None and not (2 <= self.n <= orc.MAX_AMBIENT):
            raise DomainError(f"--n must lie in 2..{orc.MAX_AMBIENT}")
        if self.K < 0 or self.K > 32:
            raise DomainError("--K must lie in 0..32")
        if self.samples < 1:
            raise DomainError("--samples must be positive")
        if self.steps is not None and self.steps < 2:
            raise DomainError("--steps must be at least 2")
        if self.fmt not in ("text", "csv"):
            raise DomainError("--format must be text or csv")


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(args.command, args.n, args.j, args.K, args.lambda_min, args.lambda_max,
                            args.steps, args.samples, args.seed, args.tol, args.format, args.out)


def _require(value, flag):
    if value is None:
        raise ContractError(f"{flag} is required for this command")
    return value


def _reference(name, n, p, k):
    """Known exact multiplier values, used to flag table rows."""
    if name == "fourier" and n == 4 and p == -2:
        return (2 * np.pi) ** 2 * (-1) ** (k // 2)
    if name == "radon" and n == 4 and k in (0, 4):
        return {0: 1.0, 4: 0.2}[k]
    if name == "cosine" and n == 3 and k == 0:
        return 0.5
    if name == "box":
        return (1 - k) * (k + n - 1) / (n - 1)
    if name == "berg":
        return 0.0 if k == 1 else (n - 1) / ((1 - k) * (k + n - 1))
    return None


def cmd_multipliers(cfg, args, out):
    n = _require(cfg.n, "--n")
    op = TransformCatalog(n, cfg.K).by_name(args.transform, p=args.p, j=cfg.j)
    if cfg.fmt == "csv":
        out.write(operator_csv(op))
        return True
    out.write(f"# {op.name} n={n} K={cfg.K} ({op.parity_domain})\n")
    for k in op.degrees():
        a = op.multipliers[k]
        ref = _reference(args.transform, n, args.p, k)
        flag = "  exact" if ref is not None and abs(a - ref) <= 1e-12 * max(1.0, abs(ref)) else ""
        out.write(f"{k:3d}  {a: .15g}{flag}\n")
    return True


def cmd_lambda_sweep(cfg, args, out):
    n, j = _require(cfg.n, "--n"), _require(cfg.j, "--j")
    tol = cfg.tol if cfg.tol is not None else rev.BISECTION_TOL
    (a_lo, a_hi), (m_lo, m_hi) = rev.lambda_closed_forms(n, j)
    lo = cfg.lambda_min if cfg.lambda_min is not None else -1.5
    hi = cfg.lambda_max if cfg.lambda_max is not None else a_hi + 0.5
    steps = cfg.steps or 41
    out.write("lambda,firey,g_min,margin,binding,partner,partner_detail\n")
    for lam in np.linspace(lo, hi, steps):
        d = rev.k_lambda(n, j, lam)
        rep = rev.firey_check(d)
        cert = rev.certify_density(rev.projection_partner(d))
        out.write(f"{lam:.6f},{int(rep.passed)},{rep.g_min_interior:.6e},{rep.strict_margin:.6e},"
                  f"{rep.binding},{int(cert.passed)},{cert.detail}\n")
    adm = rev.admissible_lambda_range(n, j, tol)
    mem = rev.jproj_membership_lambda(n, j, tol)
    ok = True
    out.write("# boundary,detected,closed_form,error,binding\n")
    for label, got, want, why in [("admissible_lower", adm.lower, a_lo, adm.lower_binding),
                                  ("admissible_upper", adm.upper, a_hi, adm.upper_binding),
                                  ("membership_lower", mem.lower, m_lo, mem.lower_binding),
                                  ("membership_upper", mem.upper, m_hi, mem.upper_binding)]:
        err = abs(got - want)
        ok &= err <= 1e-6
        out.write(f"# {label},{got:.9f},{want:.9f},{err:.2e},{why}\n")
    return ok


def cmd_counterexample(cfg, args, out):
    cert = rev.counterexample_n4(args.epsilon, cfg.steps or 50)
    if cfg.fmt == "csv":
        out.write("xi,normalized,closed_form\n")
        cf = rev.counterexample_closed_form(cert.xi, cert.epsilon)
        for x, v, c in zip(cert.xi, cert.normalized, cf):
            out.write(f"{x:.12f},{v:.15g},{c:.15g}\n")
    else:
        out.write(cert.to_text() + "\n")
    return cert.passed


def read_body(path: str) -> orc.BodyOracle:
    """Body file: a kind line, then the radius and dimension (ball) or the matrix rows."""
    with open(path) as fh:
        lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(fh, start=1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty body file", None, path)
    kind_line, kind = lines[0]
    if kind not in orc.KINDS:
        raise ParseError(f"unknown body kind {kind!r}", kind_line, path)
    rows = []
    for i, ln in lines[1:]:
        try:
            rows.append((i, [float(x) for x in ln.split()]))
        except ValueError:
            raise ParseError(f"not a number in {ln!r}", i, path) from None
    if kind == orc.BALL:
        if len(rows) != 1 or len(rows[0][1]) != 2:
            raise ParseError("ball needs one line 'radius n'", rows[0][0] if rows else kind_line, path)
        r, n = rows[0][1]
        if n != int(n) or n < 1 or r <= 0:
            raise ParseError("ball needs a positive radius and integer dimension", rows[0][0], path)
        return orc.BodyOracle.ball(int(n), r)
    n = len(rows)
    for i, row in rows:
        if len(row) != n:
            raise ParseError(f"expected {n} entries per row, found {len(row)}", i, path)
    if n == 0:
        raise ParseError("missing matrix rows", kind_line, path)
    try:
        return orc.BodyOracle(kind, np.array([r for _, r in rows]))
    except (DomainError, ContractError) as exc:
        raise ParseError(str(exc), rows[0][0], path) from None


def write_body(body: orc.BodyOracle) -> str:
    if body.kind == orc.BALL:
        return f"ball\n{body.shape!r} {body.ambient}\n"
    rows = "\n".join(" ".join(repr(float(x)) for x in row) for row in body.shape)
    return f"{body.kind}\n{rows}\n"


def _random_matrix(n, rng):
    while True:
        a = rng.standard_normal((n, n))
        if abs(np.linalg.det(a)) > 0.1:
            return a


def _partner_body(K, j):
    if K.kind == orc.BALL:
        return orc.ball_partner(K.ambient, j, K.shape)
    if K.kind == orc.ELLIPSOID:
        return orc.ellipsoid_partner(K, j)
    return orc.parallelotope_partner(K, j)


def cmd_verify_pair(cfg, args, out):
    j = _require(cfg.j, "--j")
    tol = cfg.tol if cfg.tol is not None else 1e-9
    if args.body_k:
        K = read_body(args.body_k)
    else:
        n = _require(cfg.n, "--n")
        rng = np.random.default_rng(cfg.seed)
        preset = args.preset or "cube"
        K = {"cube": lambda: orc.BodyOracle.cube(n),
             "ball": lambda: orc.BodyOracle.ball(n),
             "ellipsoid": lambda: orc.BodyOracle(orc.ELLIPSOID, _random_matrix(n, rng)),
             "parallelotope": lambda: orc.BodyOracle(orc.PARALLELOTOPE, _random_matrix(n, rng))}[preset]()
    L = read_body(args.body_l) if args.body_l else _partner_body(K, j)
    rep = orc.verify_pair(K, L, j, cfg.samples, tol, cfg.seed, relative=args.relative)
    out.write(f"K: {K.kind} in R^{K.ambient}; L: {L.kind}\n{rep.to_text()}\n")
    return rep.passed


def cmd_partner(cfg, args, out):
    j = _require(cfg.j, "--j")
    with open(args.profile) as fh:
        profile = loads_profile(fh.read(), args.profile)
    d = rev.AreaMeasureDensity(profile.dimension, j, profile)
    partner = rev.projection_partner(d)
    cert_in = rev.certify_density(d)
    cert_out = rev.certify_density(partner)
    text = dumps_profile(partner.profile)
    if args.partner_out:
        with open(args.partner_out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    out.write(f"# input order {j} ({cert_in.method}): {'PASS' if cert_in.passed else 'FAIL'} {cert_in.detail}\n")
    out.write(f"# partner order {partner.order} ({cert_out.method}): "
              f"{'PASS' if cert_out.passed else 'FAIL'} {cert_out.detail}\n")
    return cert_in.passed and cert_out.passed


def _factorization_table(reports, fmt, out):
    if fmt == "csv":
        out.write("n,j,k,fourier,composite,rel_error\n")
    for r in reports:
        if fmt == "text":
            out.write(f"n={r.n} j={r.j}: max rel err {r.max_rel_error:.3e} "
                      f"{'PASS' if r.passed else 'FAIL'}\n")
        for k, f, c, e in zip(r.degrees, r.fourier, r.composite, r.rel_errors):
            if fmt == "csv":
                out.write(f"{r.n},{r.j},{k},{f!r},{c!r},{e:.3e}\n")
            else:
                out.write(f"  k={k:2d}  F={f: .15g}  C1*Box={c: .15g}  err={e:.2e}\n")


def cmd_factorization(cfg, args, out):
    n, j = _require(cfg.n, "--n"), _require(cfg.j, "--j")
    r = verify_fourier_factorization(n, j, cfg.K if args.K is not None else 12,
                                     cfg.tol if cfg.tol is not None else 1e-8)
    _factorization_table([r], cfg.fmt, out)
    return r.passed


# Named experiments: each returns a list of (label, passed, detail).

def exp_fourier_inversion(cfg):
    rows = []
    for n in (3, 4, 5, 6):
        worst = 0.0
        for p in range(-1, -n, -1):
            for k in range(0, 17, 2):
                prod = fourier_multiplier(n, p, k) * fourier_multiplier(n, -n - p, k)
                worst = max(worst, abs(prod / (2 * np.pi) ** n - 1))
        rows.append((f"F_p F_(-n-p) = (2pi)^n, n={n}", worst <= 1e-10, f"max rel err {worst:.2e}"))
    return rows


def exp_ball_ellipsoid(cfg):
    rows = []
    rng = np.random.default_rng(cfg.seed)
    for n in (3, 4, 5):
        for j in range(1, n):
            B = orc.BodyOracle.ball(n)
            rep = orc.verify_pair(B, orc.ball_partner(n, j), j, 200, 1e-9, rng)
            rows.append((f"ball n={n} j={j}", rep.passed, f"max err {rep.max_error:.2e}"))
            E = orc.BodyOracle(orc.ELLIPSOID, _random_matrix(n, rng))
            rep = orc.verify_pair(E, orc.ellipsoid_partner(E, j), j, 200, 1e-9, rng)
            rows.append((f"ellipsoid n={n} j={j}", rep.passed, f"max err {rep.max_error:.2e}"))
    return rows


def exp_cube_self_dual(cfg):
    rows = []
    for n in (3, 4, 5):
        W = orc.BodyOracle.cube(n)
        for j in range(1, n):
            rep = orc.verify_pair(W, W, j, cfg.samples, 1e-9, cfg.seed)
            rows.append((f"cube n={n} j={j}", rep.passed, f"max err {rep.max_error:.2e}"))
    return rows


def exp_gl_covariance(cfg):
    rows = []
    rng = np.random.default_rng(cfg.seed)
    for i in range(20):
        n = 3 + i % 3
        j = 1 + i % (n - 1)
        W = orc.BodyOracle.cube(n)
        K, L = orc.gl_transform_pair(_random_matrix(n, rng), W, W, j)
        rep = orc.verify_pair(K, L, j, 100, 1e-9, rng)
        rows.append((f"GL cube pair #{i} n={n} j={j}", rep.passed, f"max err {rep.max_error:.2e}"))
        P = orc.BodyOracle(orc.PARALLELOTOPE, _random_matrix(n, rng))
        rep = orc.verify_pair(P, orc.parallelotope_partner(P, j), j, 100, 1e-9, rng)
        rows.append((f"parallelotope partner #{i} n={n} j={j}", rep.passed, f"max err {rep.max_error:.2e}"))
    return rows


def exp_k_lambda(cfg):
    rows = []
    for n in range(3, 8):
        for j in range(1, n - 1):
            (a_lo, a_hi), (m_lo, m_hi) = rev.lambda_closed_forms(n, j)
            adm = rev.admissible_lambda_range(n, j)
            mem = rev.jproj_membership_lambda(n, j)
            err_a = max(abs(adm.lower - a_lo), abs(adm.upper - a_hi))
            err_m = max(abs(mem.lower - m_lo), abs(mem.upper - m_hi))
            rows.append((f"admissible n={n} j={j}", err_a <= 1e-6,
                         f"({adm.lower:.7f}, {adm.upper:.7f}) vs ({a_lo:g}, {a_hi:.7f}); upper binds: {adm.upper_binding}"))
            rows.append((f"membership n={n} j={j}", err_m <= 1e-6,
                         f"({mem.lower:.7f}, {mem.upper:.7f}) vs ({m_lo:g}, {m_hi:.7f}); upper binds: {mem.upper_binding}"))
    return rows


def exp_counterexample(cfg):
    rows = []
    base = rev.counterexample_n4(0.0)
    rows.append(("eps=0 closed form", base.closed_form_max_error <= 1e-9, f"max err {base.closed_form_max_error:.2e}"))
    ok = abs(base.min_value + np.pi / 8) <= 1e-8 and abs(base.argmin_xi - 2 ** -0.5) <= 1e-6
    rows.append(("eps=0 minimum -pi/8 at 1/sqrt2", ok, f"{base.min_value:.12f} at {base.argmin_xi:.9f}"))
    for eps in (0.01, 0.1):
        cert = rev.counterexample_n4(eps)
        rows.append((f"eps={eps:g} certificate", cert.passed,
                     f"firey margin {cert.firey.strict_margin:.3e}, min {cert.min_value:.6f}"))
    return rows


def exp_factorization(cfg):
    reps = [verify_fourier_factorization(n, j) for n, j in FACTORIZATION_PAIRS]
    return [(f"F_-j = c C1 Box_(j+1), n={r.n} j={r.j}", r.passed, f"max rel err {r.max_rel_error:.2e}")
            for r in reps]


EXPERIMENTS = {
    "fourier-inversion": exp_fourier_inversion,
    "ball-ellipsoid": exp_ball_ellipsoid,
    "cube-self-dual": exp_cube_self_dual,
    "gl-covariance": exp_gl_covariance,
    "k-lambda": exp_k_lambda,
    "counterexample": exp_counterexample,
    "factorization": exp_factorization,
}


def cmd_experiment(cfg, args, out):
    names = list(EXPERIMENTS) if args.name == "all" else [args.name]
    ok = True
    if cfg.fmt == "csv":
        out.write("experiment,check,passed,detail\n")
    for name in names:
        t0 = time.perf_counter()
        rows = EXPERIMENTS[name](cfg)
        dt = time.perf_counter() - t0
        if cfg.fmt == "text":
            out.write(f"== {name} ({dt:.2f} s)\n")
        for label, passed, detail in rows:
            ok &= bool(passed)
            if cfg.fmt == "csv":
                out.write(f"{name},{label},{int(passed)},\"{detail}\"\n")
            else:
                out.write(f"  [{'PASS' if passed else 'FAIL'}] {label}: {detail}\n")
    return ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="ambient dimension")
    common.add_argument("--j", type=int, help="order / projection dimension")
    common.add_argument("--K", type=int, help="degree cap (default 16)")
    common.add_argument("--lambda-min", type=float)
    common.add_argument("--lambda-max", type=float)
    common.add_argument("--steps", type=int, help="grid size for sweeps")
    common.add_argument("--samples", type=int, default=1000, help="random subspaces per check")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="zonalproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("multipliers", parents=[common], help="print the multipliers of a transform")
    p.add_argument("--transform", required=True, choices=TRANSFORM_NAMES)
    p.add_argument("--p", type=float, help="degree p of the Fourier transform, in (-n, 0)")

    sub.add_parser("lambda-sweep", parents=[common], help="Firey margins of K_lambda over a lambda grid")

    p = sub.add_parser("counterexample", parents=[common], help="certificate for s_eps in dimension 4")
    p.add_argument("--epsilon", type=float, default=0.01)

    p = sub.add_parser("verify-pair", parents=[common], help="check vol_j(K|E^perp) = vol_(n-j)(L|E)")
    p.add_argument("--body-k", help="body file for K")
    p.add_argument("--body-l", help="body file for L (default: the known partner of K)")
    p.add_argument("--preset", choices=("cube", "ball", "ellipsoid", "parallelotope"))
    p.add_argument("--relative", action="store_true", help="use relative errors")

    p = sub.add_parser("partner", parents=[common], help="projection partner of a density profile")
    p.add_argument("--profile", required=True, help="profile file: 'n K parity' then K+1 coefficients")
    p.add_argument("--partner-out", help="write the partner profile here")

    sub.add_parser("factorization", parents=[common],
                   help="compare F_-j with the composite of cosine and Box_(j+1)")

    p = sub.add_parser("experiment", parents=[common], help="run a named reproduction experiment")
    p.add_argument("name", choices=list(EXPERIMENTS) + ["all"])
    return parser


COMMANDS = {
    "multipliers": cmd_multipliers,
    "lambda-sweep": cmd_lambda_sweep,
    "counterexample": cmd_counterexample,
    "verify-pair": cmd_verify_pair,
    "partner": cmd_partner,
    "factorization": cmd_factorization,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(argparse.Namespace(**{**vars(args), "K": 16 if args.K is None else args.K}))
        buf = io.StringIO()
        ok = COMMANDS[args.command](cfg, args, buf)
    except (ParseError, DomainError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
