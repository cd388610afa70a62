"""
Command-line entry point.

    floquet-pacs floquet    --config cfg.json [--out report.json]
    floquet-pacs covariance --config cfg.json --state pacs --alpha "0.8,0;0.5,0" --m 1,2 --t 0,0.25T
    floquet-pacs wigner     --config cfg.json --state fock --m 1 --grid q1=-4:4:201 p1=-4:4:201 --out w.csv
    floquet-pacs wavefunction --config cfg.json --state pacs --alpha 1,0 --m 1 --grid q1=-6:6:401 --out psi.csv
    floquet-pacs verify     --config cfg.json

Exit codes: 0 success, 1 usage or validation error (including a failed
``verify`` check), 2 unstable configuration.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import serialize
from .errors import FloquetPacsError, UnstableError
from .floquet import build_flt, corrupted, fundamental_matrix, monodromy_and_exponents
from .model import load_configuration
from .phase_space import (
    Axis,
    PhaseSpaceGrid,
    axis_names,
    negativity_scan,
    wavefunction_pacs,
    wigner_pacs,
)
from .states import StateSpec, covariance_quadrature, mean_quadratures
from .verify import run_checks

EXIT_OK, EXIT_ERROR, EXIT_UNSTABLE = 0, 1, 2
DEFAULT_AXIS = Axis(-5.0, 5.0, 201)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    command: str
    config_path: str
    state: str = None
    alpha: list = field(default_factory=list)
    excitations: list = field(default_factory=list)
    times: list = field(default_factory=lambda: ["0"])
    grid: dict = field(default_factory=dict)
    pinned: dict = field(default_factory=dict)
    out: str = None
    format: str = "structured"
    verify: bool = False
    include_samples: bool = False
    corrupt_u: float = None


def parse_alpha(text):
    """``"re,im;re,im"`` -> list of complex."""
    out = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",") if p.strip()]
        if len(parts) not in (1, 2):
            raise UsageError(f"bad --alpha entry {chunk!r}; expected re,im")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise UsageError(f"bad --alpha entry {chunk!r}") from None
        out.append(complex(vals[0], vals[1] if len(vals) == 2 else 0.0))
    return out


def parse_time(text, period):
    """Absolute time or a multiple of the period written ``0.25T``."""
    text = text.strip()
    try:
        if text.endswith("T"):
            factor = text[:-1].strip()
            return (float(factor) if factor else 1.0) * period
        return float(text)
    except ValueError:
        raise UsageError(f"bad time {text!r}") from None


def parse_grid(items):
    axes = {}
    for item in items or []:
        try:
            name, rng = item.split("=")
            lo, hi, count = rng.split(":")
            axes[name.strip()] = Axis(float(lo), float(hi), int(count))
        except ValueError as exc:
            raise UsageError(f"bad --grid entry {item!r} ({exc})") from None
    return axes


def parse_pins(items):
    pins = {}
    for item in items or []:
        try:
            name, value = item.split("=")
            pins[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad --pin entry {item!r}") from None
    return pins


def build_spec(manifest, n_modes):
    family = (manifest.state or "coherent").lower()
    alpha = manifest.alpha or [0j] * n_modes
    m = manifest.excitations or [0] * n_modes
    if len(alpha) != n_modes or len(m) != n_modes:
        raise UsageError(f"state needs {n_modes} alpha values and {n_modes} excitation numbers")
    try:
        if family == "fock":
            if manifest.alpha and any(alpha):
                raise UsageError("Fock states take no --alpha")
            return StateSpec.fock(m)
        if family == "coherent":
            if any(m):
                raise UsageError("coherent states take no --m")
            return StateSpec.coherent(alpha)
        if family == "pacs":
            return StateSpec.pacs(alpha, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown state family {family!r}")


def _emit(text, out):
    if out:
        Path(out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def _verify_report(decomp):
    checks = run_checks(decomp)
    lines = [f"{'check':32s} {'residual':>24s} {'tolerance':>10s}  status"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.name:32s} {serialize.fmt(c.residual):>24s} {c.tolerance:10.0e}  {status}")
    ok = all(c.passed for c in checks)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'} ({sum(c.passed for c in checks)}/{len(checks)})")
    return ok, "\n".join(lines) + "\n", checks


def cmd_floquet(manifest):
    config = load_configuration(manifest.config_path)
    phi = fundamental_matrix(config)
    analysis = monodromy_and_exponents(config, phi)
    if not analysis.stable:
        report = {
            "stable": False,
            "stability_margin": analysis.stability_margin,
            "multipliers": np.sort_complex(np.linalg.eigvals(analysis.monodromy)).tolist(),
            "monodromy": analysis.monodromy,
        }
        _emit(serialize.dumps(report), manifest.out)
        sys.stderr.write(f"unstable configuration: stability margin {serialize.fmt(analysis.stability_margin)}\n")
        return EXIT_UNSTABLE
    decomp = _decomposition(manifest, config)
    report = decomp.to_dict(include_samples=manifest.include_samples)
    _, _, checks = _verify_report(decomp)
    report["residuals"] = {c.name: c.residual for c in checks[:8]}
    _emit(serialize.dumps(report), manifest.out)
    return EXIT_OK


def _decomposition(manifest, config=None):
    config = config or load_configuration(manifest.config_path)
    decomp = build_flt(config)
    if manifest.corrupt_u is not None:
        decomp = corrupted(decomp, manifest.corrupt_u)
    return decomp


def cmd_covariance(manifest):
    decomp = _decomposition(manifest)
    spec = build_spec(manifest, decomp.n_modes)
    times = [parse_time(t, decomp.period) for t in manifest.times]
    reports = [covariance_quadrature(decomp, t, spec) for t in times]
    if manifest.format == "csv":
        rows = [(r.t, r.determinant, r.robertson_bound, r.gap) for r in reports]
        _emit(serialize.csv_text(["t", "det", "bound", "gap"], rows), manifest.out)
    else:
        _emit(serialize.dumps({"state": spec.to_dict(), "reports": [r.to_dict() for r in reports]}), manifest.out)
    return EXIT_OK


def _slice_grid(manifest, decomp, spec, t):
    n = decomp.n_modes
    names = axis_names(n)
    axes = dict(manifest.grid)
    pins = dict(manifest.pinned)
    if not axes:
        axes = {"q1": DEFAULT_AXIS, "p1": DEFAULT_AXIS}
    mean = mean_quadratures(decomp, t, spec)
    for k, name in enumerate(names):
        if name not in axes and name not in pins:
            pins[name] = float(mean[k])
    try:
        return PhaseSpaceGrid(n, axes, pins)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_wigner(manifest):
    decomp = _decomposition(manifest)
    spec = build_spec(manifest, decomp.n_modes)
    t = parse_time(manifest.times[0], decomp.period)
    grid = wigner_pacs(decomp, t, spec, _slice_grid(manifest, decomp, spec, t))
    stats = negativity_scan(grid)
    names = axis_names(decomp.n_modes)
    pts = grid.points().reshape(-1, 2 * decomp.n_modes)
    w = grid.samples.reshape(-1)
    text = serialize.csv_text(names + ["W"], np.column_stack([pts, w]))
    meta = {
        "state": spec.to_dict(),
        "t": t,
        "axes": {k: [a.start, a.stop, a.count] for k, a in grid.axes.items()},
        "pinned": grid.pinned,
        "normalization": "integral of W over R^(2N) equals (2 pi)^N",
        "min_value": stats.min_value,
        "min_location": stats.min_location,
        "negative_mass": stats.negative_mass,
    }
    _emit(text, manifest.out)
    if manifest.out:
        Path(str(manifest.out) + ".meta.json").write_text(serialize.dumps(meta), newline="\n")
    else:
        sys.stderr.write(serialize.dumps(meta))
    return EXIT_OK


def cmd_wavefunction(manifest):
    decomp = _decomposition(manifest)
    n = decomp.n_modes
    spec = build_spec(manifest, n)
    t = parse_time(manifest.times[0], decomp.period)
    names = [f"q{k + 1}" for k in range(n)]
    axes = dict(manifest.grid) or {"q1": DEFAULT_AXIS}
    pins = dict(manifest.pinned)
    if set(axes) - set(names) or set(pins) - set(names):
        raise UsageError("wavefunction grids take position axes only")
    mean = mean_quadratures(decomp, t, spec)
    for k, name in enumerate(names):
        if name not in axes and name not in pins:
            pins[name] = float(mean[k])
    mesh = np.meshgrid(*(a.values for a in axes.values()), indexing="ij")
    free = dict(zip(axes, mesh))
    shape = mesh[0].shape
    q = np.stack([free[k] if k in free else np.full(shape, pins[k]) for k in names], axis=-1)
    psi = wavefunction_pacs(decomp, t, spec, q).reshape(-1)
    rows = np.column_stack([q.reshape(-1, n), psi.real, psi.imag, np.abs(psi) ** 2])
    _emit(serialize.csv_text(names + ["re", "im", "abs2"], rows), manifest.out)
    return EXIT_OK


def cmd_verify(manifest):
    decomp = _decomposition(manifest)
    ok, text, _ = _verify_report(decomp)
    _emit(text, manifest.out)
    return EXIT_OK if ok else EXIT_ERROR


COMMANDS = {
    "floquet": cmd_floquet,
    "covariance": cmd_covariance,
    "wigner": cmd_wigner,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


def make_parser():
    parser = _Parser(prog="floquet-pacs", description="Floquet analysis of periodically driven oscillators.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON configuration file")
    parser.add_argument("--state", choices=["fock", "coherent", "pacs"])
    parser.add_argument("--alpha", help="displacements re,im[;re,im...]")
    parser.add_argument("--m", help="excitations k[,k...]")
    parser.add_argument("--t", default="0", help="times, absolute or as fractions like 0.25T")
    parser.add_argument("--grid", nargs="+", action="extend", help="axis=min:max:count")
    parser.add_argument("--pin", nargs="+", action="extend", help="axis=value")
    parser.add_argument("--out")
    parser.add_argument("--format", choices=["csv", "structured"], default="structured")
    parser.add_argument("--verify", action="store_true", help="also run the invariant checks")
    parser.add_argument("--include-samples", action="store_true", help="export all F(t_k) samples")
    parser.add_argument("--corrupt-u", type=float, help=argparse.SUPPRESS)
    return parser


def manifest_from_args(args):
    try:
        m = [int(x) for x in args.m.split(",")] if args.m else []
    except ValueError:
        raise UsageError(f"bad --m {args.m!r}") from None
    return RunManifest(
        command=args.command,
        config_path=args.config,
        state=args.state,
        alpha=parse_alpha(args.alpha) if args.alpha else [],
        excitations=m,
        times=[s for s in args.t.split(",") if s.strip()],
        grid=parse_grid(args.grid),
        pinned=parse_pins(args.pin),
        out=args.out,
        format=args.format,
        verify=args.verify,
        include_samples=args.include_samples,
        corrupt_u=args.corrupt_u,
    )


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        manifest = manifest_from_args(args)
        code = COMMANDS[manifest.command](manifest)
        if manifest.verify and manifest.command != "verify" and code == EXIT_OK:
            ok, text, _ = _verify_report(_decomposition(manifest))
            sys.stderr.write(text)
            code = EXIT_OK if ok else EXIT_ERROR
        return code
    except UnstableError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_UNSTABLE
    except (UsageError, FloquetPacsError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
