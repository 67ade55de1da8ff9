"""Command-line front end: CSV reports and PPM images.

Every CSV starts with ``# schema=1`` and a run line recording version, b,
seed and policy values.  Numbers are printed with 17 significant digits.
Exit codes: 0 success, 1 validation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import RenormJuliaError

SEED_ENV = "RENORM_JULIA_SEED"


# ---------------------------------------------------------------------------
# flag parsing
# ---------------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """'re,im' or 're'."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def parse_range(text: str) -> np.ndarray:
    """'start:stop:step' (inclusive stop), or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return start + step * np.arange(n)
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'start:stop:step' or a list, got {text!r}") from None


def parse_word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected digits like '0,1', got {text!r}") from None


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    b: int
    seed: int
    policy: dict
    out: str | None
    deterministic: bool
    jobs: int


@dataclass
class Report:
    cfg: RunConfig
    lines: list = field(default_factory=list)

    def header(self, **extra):
        c = self.cfg
        self.lines.append("# schema=1")
        items = [f"version={__version__}", f"command={c.subcommand}", f"b={c.b}", f"seed={c.seed}"]
        items += [f"{k}={fmt(v)}" for k, v in c.policy.items()]
        items += [f"{k}={v}" for k, v in extra.items()]
        if not c.deterministic:
            items.append("timestamp=" + datetime.datetime.now(datetime.timezone.utc).isoformat())
        self.lines.append("# " + " ".join(items))

    def comment(self, text: str):
        self.lines.append("# " + text)

    def columns(self, *names):
        self.lines.append(",".join(names))

    def row(self, *values):
        self.lines.append(",".join(fmt(v) for v in values))

    def emit(self):
        text = "\n".join(self.lines) + "\n"
        if self.cfg.out in (None, "-"):
            sys.stdout.write(text)
        else:
            try:
                with open(self.cfg.out, "w", encoding="ascii", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                raise OSError(f"cannot write report to {self.cfg.out}: {exc}") from exc


def _policy(args):
    from .free_energy import TruncationPolicy
    return TruncationPolicy(args.tol, args.max_terms, args.stop_radius)


def _params(args):
    from .rational_map import MapParams
    return MapParams(args.b)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_map_orbit(args, rep: Report) -> int:
    from .rational_map import INFINITY, eval_map
    p = _params(args)
    rep.header(t=f"{args.t.real!r},{args.t.imag!r}")
    rep.columns("n", "re", "im", "is_infinity")
    z = args.t
    for n in range(args.steps + 1):
        if z is INFINITY:
            rep.row(n, "inf", "inf", 1)
        else:
            rep.row(n, z.real, z.imag, 0)
        z = eval_map(p, z)
    return 0


def cmd_free_energy(args, rep: Report) -> int:
    from .free_energy import PhysicalParams, eval_F_jet, eval_physical_free_energy, temperature_to_t
    p = _params(args)
    pol = _policy(args)
    if args.T is not None:
        pp = PhysicalParams(args.J, args.T)
        t = temperature_to_t(pp, p.b)
        rep.header(J=fmt(args.J), T=f"{args.T.real!r},{args.T.imag!r}")
        rep.columns("quantity", "re", "im")
        rep.row("t0", t.real, t.imag)
        fe = eval_physical_free_energy(pp, p.b, pol)
        rep.row("free_energy", fe.real, fe.imag)
        return 0
    rep.header(t=f"{args.t.real!r},{args.t.imag!r}", order=args.order)
    jet = eval_F_jet(p, args.t, pol, args.order)
    rep.columns("k", "re", "im")
    for k in range(args.order + 1):
        v = jet.derivative(k)
        rep.row(k, v.real, v.imag)
    return 0


def cmd_julia_render(args, rep: Report) -> int:
    from .julia_render import RasterSpec, render_raster
    p = _params(args)
    spec = RasterSpec(args.center, args.width, args.px, args.max_iter, args.eps)
    if args.out in (None, "-"):
        raise RenormJuliaError("julia-render needs --out for the image file")
    counts = render_raster(p, spec, args.out, jobs=args.jobs)
    if args.report:
        rep.cfg.out = args.report
        rep.header(center=f"{spec.center.real!r},{spec.center.imag!r}", width=fmt(spec.width), px=spec.pixels,
                   max_iter=spec.max_iter, eps=fmt(spec.eps))
        rep.columns("class", "pixels", "fraction")
        total = spec.pixels ** 2
        for k, v in counts.items():
            rep.row(k, v, v / total)
        rep.emit()
    return 0


def cmd_geodesic_trace(args, rep: Report) -> int:
    from .boettcher import geodesic_point, green_potential
    from .exponents import RadiusSchedule
    p = _params(args)
    sched = RadiusSchedule(p.b, args.levels, args.g0)
    rep.header(theta=fmt(args.theta), levels=args.levels, g0=fmt(args.g0))
    rep.columns("level", "g", "re", "im", "green_potential")
    for k, g in enumerate(sched.potentials):
        t = geodesic_point(p, args.theta, float(g))
        rep.row(k, g, t.real, t.imag, green_potential(p, t))
    return 0


def cmd_harmonic_lyapunov(args, rep: Report) -> int:
    from .thermo import lyapunov_harmonic
    p = _params(args)
    est = lyapunov_harmonic(p, args.samples, args.g_small, args.seed)
    rep.header(samples=args.samples, g_small=fmt(args.g_small))
    rep.columns("estimate", "stderr", "ln_b", "rel_error", "n_samples", "n_failed")
    rep.row(est.estimate, est.stderr, math.log(p.b), est.estimate / math.log(p.b) - 1.0, est.n_samples, est.n_failed)
    return 0


def cmd_pressure_curve(args, rep: Report) -> int:
    from .thermo import default_burn_in, pressure_curve
    p = _params(args)
    m = default_burn_in(args.depth) if args.burn_in is None else args.burn_in
    curve = pressure_curve(p, args.kappa, args.depth, m)
    rep.header(depth=args.depth, burn_in=m)
    rep.columns("kappa", "pressure", "ln_b", "support_size")
    for e in curve:
        rep.row(e.kappa, e.value, math.log(p.b), e.support_size)
    return 0


def cmd_exponent_complex(args, rep: Report) -> int:
    from .exponents import complex_exponent_experiment
    p = _params(args)
    res = complex_exponent_experiment(p, args.angles, args.levels, args.seed, args.g0, _policy(args))
    rep.header(angles=args.angles, levels=args.levels, g0=fmt(args.g0))
    rep.columns("theta", "level", "g", "one_minus_r", "abs_Fpp", "envelope")
    pots, omr = res.schedule.potentials, res.schedule.one_minus_r
    for rec in res.angles:
        for k in range(len(pots)):
            rep.row(rec.theta, k, pots[k], omr[k], rec.abs_Fpp[k], rec.envelope[k])
    rep.comment("summary columns: summary,median_slope,q1,q3,predicted,n_failed")
    rep.row("summary", res.median_slope, res.iqr[0], res.iqr[1], res.predicted, res.n_failed)
    return 0


def _geodesic_exponent_report(res, rep: Report) -> None:
    rep.columns("level", "g", "re", "im", "distance", "abs_derivative")
    pots = res.schedule.potentials
    for k in range(len(pots)):
        t = res.points[k]
        rep.row(k, pots[k], t.real, t.imag, res.distance[k], res.abs_derivative[k])
    rep.comment("summary columns: summary,slope,predicted,m,chi,n_points,rms_residual")
    f = res.fit
    rep.row("summary", f.slope, f.predicted, res.m, res.chi, f.n_points, f.rms_residual)


def cmd_exponent_real(args, rep: Report) -> int:
    from .exponents import real_exponent_at_tc
    p = _params(args)
    res = real_exponent_at_tc(p, args.levels, args.g0, _policy(args))
    rep.header(levels=args.levels, g0=fmt(args.g0))
    _geodesic_exponent_report(res, rep)
    return 0


def cmd_exponent_periodic(args, rep: Report) -> int:
    from .exponents import periodic_exponent_experiment
    p = _params(args)
    res = periodic_exponent_experiment(p, args.word, args.levels, args.g0, _policy(args))
    rep.header(word="".join(str(d) for d in args.word), levels=args.levels, g0=fmt(args.g0))
    _geodesic_exponent_report(res, rep)
    return 0


def cmd_oracle_verify(args, rep: Report) -> int:
    from .lattice_oracle import build_lattice, coupling_flow, decimate_cell, exact_logZ, verify_decimation
    rep.header(n=args.n, threshold=fmt(args.threshold))
    rep.columns("b", "n", "K", "logZ", "K_eff", "log_c", "residual")
    fine = build_lattice(args.b, args.n + 1)
    worst = 0.0
    for K in args.K:
        d = decimate_cell(args.b, K)
        r = verify_decimation(args.b, args.n, K)
        worst = max(worst, r)
        rep.row(args.b, args.n, K, exact_logZ(fine, K), d.K_eff, d.log_c, r)
    if args.flow:
        rep.comment("exploratory flow columns: step,K,exp(-2K/b),t_orbit")
        for row in coupling_flow(args.b, float(args.K[0]), args.flow):
            rep.row("flow", *row)
    return 0 if worst < args.threshold else 1


def cmd_selftest(args, rep: Report) -> int:
    from .selftest import run_checks
    rep.header()
    rep.columns("check", "status", "value", "threshold")
    ok = True
    for name, passed, value, threshold in run_checks(args.b):
        ok &= passed
        rep.row(name, "pass" if passed else "FAIL", value, threshold)
    return 0 if ok else 1


COMMANDS = {
    "map-orbit": cmd_map_orbit,
    "free-energy": cmd_free_energy,
    "julia-render": cmd_julia_render,
    "geodesic-trace": cmd_geodesic_trace,
    "harmonic-lyapunov": cmd_harmonic_lyapunov,
    "pressure-curve": cmd_pressure_curve,
    "exponent-complex": cmd_exponent_complex,
    "exponent-real": cmd_exponent_real,
    "exponent-periodic": cmd_exponent_periodic,
    "oracle-verify": cmd_oracle_verify,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--b", type=int, default=3, help="branching number (default 3)")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--deterministic", action="store_true", help="omit the timestamp from headers")
    common.add_argument("--jobs", type=int, default=1, help="maximum worker threads")
    common.add_argument("--tol", type=float, default=1e-15, help="series tail tolerance")
    common.add_argument("--max-terms", type=int, default=400, help="series term cap")
    common.add_argument("--stop-radius", type=float, default=1e-16, help="orbit collapse radius")

    parser = argparse.ArgumentParser(
        prog="renorm-julia",
        description="Free energy, Julia sets and critical exponents of the diamond-lattice renormalization map.",
        epilog="Complex flags take 're,im'; write negative values as --t=-0.5,0.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    s = add("map-orbit", "forward orbit of a point on the sphere")
    s.add_argument("--t", type=parse_complex, required=True)
    s.add_argument("--steps", type=int, default=20)

    s = add("free-energy", "F and its derivatives at t, or the physical free energy at (J, T)")
    s.add_argument("--t", type=parse_complex, default=complex(0.5))
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--J", type=float, default=1.0)
    s.add_argument("--T", type=parse_complex, default=None)

    s = add("julia-render", "binary PPM image of the basins of 0 and 1")
    s.add_argument("--center", type=parse_complex, default=0j)
    s.add_argument("--width", type=float, default=3.0)
    s.add_argument("--px", type=int, default=512)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--report", default=None, help="optional CSV of pixel counts")

    s = add("geodesic-trace", "points of one hyperbolic geodesic on the potential schedule")
    s.add_argument("--theta", type=float, required=True, help="angle in turns")
    s.add_argument("--levels", type=int, default=12)
    s.add_argument("--g0", type=float, default=math.log(2.0))

    s = add("harmonic-lyapunov", "harmonic-measure average of ln|f'|")
    s.add_argument("--samples", type=int, default=20000)
    s.add_argument("--g-small", type=float, default=1e-8)

    s = add("pressure-curve", "finite-depth pressure of -kappa ln|beta|")
    s.add_argument("--kappa", type=parse_range, default=parse_range("0:0.5:0.05"))
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--burn-in", type=int, default=None)

    s = add("exponent-complex", "F'' growth along random geodesics")
    s.add_argument("--angles", type=int, default=50)
    s.add_argument("--levels", type=int, default=16)
    s.add_argument("--g0", type=float, default=math.log(2.0))

    s = add("exponent-real", "exponent of F^(m) approaching t_c along the real axis")
    s.add_argument("--levels", type=int, default=16)
    s.add_argument("--g0", type=float, default=math.log(2.0))

    s = add("exponent-periodic", "exponent of F^(m) approaching a periodic boundary point")
    s.add_argument("--word", type=parse_word, required=True, help="digits, e.g. 0,1")
    s.add_argument("--levels", type=int, default=16)
    s.add_argument("--g0", type=float, default=math.log(2.0))

    s = add("oracle-verify", "exact bond decimation check by enumeration")
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--K", type=parse_range, default=np.linspace(0.05, 2.0, 20), help="couplings (default 20 points in [0.05, 2])")
    s.add_argument("--threshold", type=float, default=1e-9)
    s.add_argument("--flow", type=int, default=0, help="also tabulate this many coupling-flow steps")

    add("selftest", "quick invariant suite with a pass/fail table")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 0
        except ValueError:
            parser.print_usage(sys.stderr)
            print(f"error: {SEED_ENV} must be an integer", file=sys.stderr)
            return 2
    args.seed = seed
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    cfg = RunConfig(args.command, args.b, seed,
                    {"tol": args.tol, "max_terms": args.max_terms, "stop_radius": args.stop_radius},
                    args.out, args.deterministic, args.jobs)
    rep = Report(cfg)
    try:
        code = COMMANDS[args.command](args, rep)
        if rep.lines and args.command != "julia-render":
            rep.emit()
    except (RenormJuliaError, ValueError, TypeError, OSError) as exc:
        print(f"renorm-julia {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
