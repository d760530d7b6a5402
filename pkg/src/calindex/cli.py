"""Command-line front end.

Subcommands: index, fredholm, eta, nahm, degree, charge (the 4D run), and
verify (identity suites plus the numeric quadrature suite).  Boundary data
comes from a JSON config with the exact schema

    {"mu0": number, "k0": integer, "lines": [{"mu": number, "k": integer}...],
     "field": {"grid3": int, "gridz": int, "h_fd": number, "twist_degree": int,
               "r1": number, "rho_out": number}?}

Unknown keys are rejected.  Floats print with 12 significant digits and all
output orderings are fixed, so identical invocations are byte-identical.
Exit codes: 0 ok, 1 config problem, 2 not Fredholm, 3 numeric tolerance
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import nahm
from .boundary import BoundaryData, fredholm_check, spectral_gap, validate
from .callias import index_total
from .errors import CalindexError, NotFredholm
from .eta import eta_index_identity, eta_bar_lim
from .fields import make_clutching_map, make_monopole_pullback, make_twisted_caloron
from .quadrature import (
    GridSpec,
    boundary_face_integral,
    chern_simons_consistency,
    integrate_c1_sphere,
    integrate_ch_4d,
    integrate_degree_ball,
)
from .sampling import random_boundary_data, random_fredholm_shift

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_FREDHOLM = 2
EXIT_TOLERANCE = 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FieldRecipe:
    grid3: int = 48
    gridz: int = 32
    h_fd: float = 1.0 / 96.0
    twist_degree: int = 0
    r1: float = 0.6
    rho_out: float = 0.45

    def grid(self) -> GridSpec:
        return GridSpec(n3=self.grid3, nz=self.gridz, nx=self.grid3, h_fd=self.h_fd)


@dataclass(frozen=True)
class RunConfig:
    data: BoundaryData
    field: FieldRecipe | None


def _require_keys(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def parse_config(doc: dict) -> RunConfig:
    _require_keys(doc, {"mu0", "k0", "lines", "field"}, "config")
    for key in ("mu0", "k0", "lines"):
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}")
    lines = []
    for i, entry in enumerate(doc["lines"]):
        _require_keys(entry, {"mu", "k"}, f"lines[{i}]")
        if "mu" not in entry or "k" not in entry:
            raise ConfigError(f"lines[{i}] needs both 'mu' and 'k'")
        if not float(entry["k"]).is_integer():
            raise ConfigError(f"lines[{i}].k must be an integer")
        lines.append((float(entry["mu"]), int(entry["k"])))
    if not float(doc["k0"]).is_integer():
        raise ConfigError("k0 must be an integer")
    data = BoundaryData.make(float(doc["mu0"]), lines, int(doc["k0"]))
    recipe = None
    if "field" in doc and doc["field"] is not None:
        fdoc = dict(doc["field"])
        _require_keys(
            fdoc, {"grid3", "gridz", "h_fd", "twist_degree", "r1", "rho_out"}, "field"
        )
        recipe = FieldRecipe(
            grid3=int(fdoc.get("grid3", 48)),
            gridz=int(fdoc.get("gridz", 32)),
            h_fd=float(fdoc.get("h_fd", 1.0 / 96.0)),
            twist_degree=int(fdoc.get("twist_degree", 0)),
            r1=float(fdoc.get("r1", 0.6)),
            rho_out=float(fdoc.get("rho_out", 0.45)),
        )
    return RunConfig(data=data, field=recipe)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    cfg = parse_config(doc)
    validate(cfg.data)
    return cfg


def build_field(cfg: RunConfig):
    recipe = cfg.field or FieldRecipe()
    fieldcfg = make_monopole_pullback(cfg.data, r1=recipe.r1)
    if recipe.twist_degree != 0:
        cmap = make_clutching_map(cfg.data.rank, recipe.twist_degree, recipe.rho_out)
        fieldcfg = make_twisted_caloron(fieldcfg, cmap)
    return fieldcfg, recipe


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(doc, out_path) -> None:
    _emit(json.dumps(_round_floats(doc), indent=2, sort_keys=True) + "\n", out_path)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_index(args) -> int:
    cfg = load_config(args.config)
    breakdown = index_total(cfg.data, args.t)
    report = eta_index_identity(cfg.data, args.t)
    if args.format == "json":
        doc = {
            "t": args.t,
            "total": breakdown.total,
            "k0_term": breakdown.k0_term,
            "mode_terms": {str(k): v for k, v in sorted(breakdown.mode_terms.items())},
            "eta_identity_residual": report.residual,
        }
        _emit_json(doc, args.out)
    else:
        rows = [f"{'index total':<17}{breakdown.total}", f"{'k0 term':<17}{breakdown.k0_term}"]
        for k in sorted(breakdown.mode_terms):
            rows.append(f"{f'mode k={k:+d}':<17}{breakdown.mode_terms[k]}")
        rows.append(f"{'eta residual':<17}{fmt(report.residual)}")
        _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_fredholm(args) -> int:
    cfg = load_config(args.config)
    ok = fredholm_check(cfg.data, args.t)
    gap = spectral_gap(cfg.data, args.t)
    if ok:
        _emit(f"Fredholm at t={fmt(args.t)} (spectral gap {fmt(gap)})\n", args.out)
        return EXIT_OK
    _emit(f"NOT Fredholm at t={fmt(args.t)}\n", args.out)
    return EXIT_NOT_FREDHOLM


def cmd_eta(args) -> int:
    cfg = load_config(args.config)
    report = eta_index_identity(cfg.data, args.t)
    if args.format == "json":
        doc = {
            "t": args.t,
            "eta_bar_lim": report.eta_bar_lim,
            "per_line": [
                {"line": j, "eps": eps, "eta": eta} for j, eps, eta in report.per_line
            ],
            "chern_character_integral": report.chern_character_integral,
            "index_via_eta": report.index_via_eta,
            "residual": report.residual,
        }
        _emit_json(doc, args.out)
    else:
        rows = [f"eta_bar_lim      {fmt(report.eta_bar_lim)}"]
        for j, eps, eta in report.per_line:
            rows.append(f"line {j}: eps={fmt(eps)} eta={fmt(eta)}")
        rows.append(f"charge integral  {fmt(report.chern_character_integral)}")
        rows.append(f"index (eta form) {fmt(report.index_via_eta)}")
        _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_nahm(args) -> int:
    cfg = load_config(args.config)
    if not (args.t_min < args.t_max):
        raise ConfigError(f"need t_min < t_max, got [{args.t_min}, {args.t_max}]")
    profile = nahm.rank_profile(cfg.data)
    segments = nahm.extend_profile(profile, args.t_min, args.t_max)
    consistency = nahm.profile_consistency_check(cfg.data)
    if args.format == "json":
        doc = {
            "segments": [
                {"t_lo": s.t_lo, "t_hi": s.t_hi, "index": s.index, "rank": s.rank}
                for s in segments
            ],
            "jump_points": list(profile.jump_points),
            "mj_advisory": [list(p) for p in profile.mj_advisory],
            "consistency": {
                "verdict": consistency.verdict,
                "profile_ranks": list(consistency.profile_ranks),
                "advisory_m": list(consistency.advisory_m),
            },
        }
        _emit_json(doc, args.out)
    else:
        rows = ["t_lo,t_hi,index,rank"]
        for s in segments:
            rows.append(f"{fmt(s.t_lo)},{fmt(s.t_hi)},{s.index},{s.rank}")
        _emit("\n".join(rows) + "\n", args.out)
        sys.stderr.write(
            f"consistency: {consistency.verdict} profile={list(consistency.profile_ranks)} "
            f"advisory_m={list(consistency.advisory_m)}\n"
        )
    if args.plot:
        _step_plot(segments, args.plot)
    return EXIT_OK


def _step_plot(segments, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3))
    for seg in segments:
        ax.hlines(seg.rank, seg.t_lo, seg.t_hi, colors="tab:blue", lw=2)
        ax.axvline(seg.t_hi, color="0.8", ls=":", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("rank")
    ax.set_title("Nahm rank profile")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_degree(args) -> int:
    rho_out = 0.45
    rank = 2
    grid = GridSpec()
    if args.config:
        cfg = load_config(args.config)
        recipe = cfg.field or FieldRecipe()
        rho_out = recipe.rho_out
        rank = max(2, cfg.data.rank)
        grid = recipe.grid()
    if args.grid:
        grid = GridSpec(n3=args.grid, nz=grid.nz, nx=args.grid, h_fd=grid.h_fd)
    cmap = make_clutching_map(rank, args.d, rho_out)
    report = integrate_degree_ball(cmap, grid)
    if args.format == "json":
        _emit_json(report.to_dict(), args.out)
    else:
        _emit(
            f"degree numeric {fmt(report.numeric)} rounds to {report.details['rounded']} "
            f"(requested {args.d})\n",
            args.out,
        )
    return EXIT_OK if report.details["integral_ok"] else EXIT_TOLERANCE


def cmd_charge(args) -> int:
    cfg = load_config(args.config)
    fieldcfg, recipe = build_field(cfg)
    grid = recipe.grid()
    if args.grid:
        grid = GridSpec(n3=args.grid, nz=grid.nz, nx=args.grid, h_fd=grid.h_fd)
    report = integrate_ch_4d(fieldcfg, grid, workers=args.threads)
    if args.format == "json":
        _emit_json(report.to_dict(), args.out)
    elif args.format == "csv" and args.out:
        from .quadrature import append_report_csv

        append_report_csv(args.out, [report])
    else:
        _emit(
            f"ch integral numeric {fmt(report.numeric)} closed form {fmt(report.closed_form)} "
            f"abs error {fmt(report.abs_error)}\n",
            args.out,
        )
    rel = report.abs_error / max(1.0, abs(report.closed_form))
    return EXIT_OK if rel <= 0.01 else EXIT_TOLERANCE


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    results: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        results.append((name, ok, detail))

    rng = np.random.default_rng(20260808)
    # Identity suites on seeded random data.
    worst = 0.0
    for _ in range(1000):
        data = random_boundary_data(rng)
        t = random_fredholm_shift(rng, data)
        rep = eta_index_identity(data, t)
        worst = max(worst, abs(rep.residual))
    record("eta_identity_1000", worst <= 1e-9, f"worst residual {worst:.3e}")

    exact = True
    for _ in range(300):
        data = random_boundary_data(rng)
        t = random_fredholm_shift(rng, data)
        base = index_total(data, t).total
        shifted = BoundaryData(data.mu0, data.lines, data.k0 - 3)
        if index_total(shifted, t).total - base != 3:
            exact = False
        if index_total(data, t + data.mu0).total != base:
            exact = False
    record("excision_periodicity_300", exact)

    jump_ok = True
    checked = 0
    while checked < 200:
        data = random_boundary_data(rng)
        line = data.lines[int(rng.integers(0, data.rank))]
        delta = 1e-4 * data.mu0
        # Distance of every line's jump translate from this one.
        dist = [
            abs((ln.mu - line.mu) / data.mu0 - round((ln.mu - line.mu) / data.mu0)) * data.mu0
            for ln in data.lines
        ]
        if any(0.1 * delta < d < 3.0 * delta for d in dist):
            continue  # another jump too close to bracket cleanly
        t_lo, t_hi = line.mu - delta, line.mu + delta
        jump = index_total(data, t_hi).total - index_total(data, t_lo).total
        expected = sum(ln.k for ln, d in zip(data.lines, dist) if d <= 0.1 * delta)
        if jump != expected:
            jump_ok = False
        checked += 1
    record("jump_rule_200", jump_ok)

    if cfg.field is not None:
        fieldcfg, recipe = build_field(cfg)
        grid = recipe.grid()
        for j in range(cfg.data.rank):
            rep = integrate_c1_sphere(fieldcfg, j, grid=grid)
            record(f"c1_sphere_line{j}", rep.abs_error <= 1e-6, f"err {rep.abs_error:.2e}")
        if recipe.twist_degree != 0:
            rep = integrate_degree_ball(fieldcfg.twist.cmap, grid)
            record("degree_ball", rep.abs_error <= 0.05, f"err {rep.abs_error:.3f}")
        face = boundary_face_integral(fieldcfg, grid=grid)
        record("boundary_face", face.abs_error <= 1e-6, f"err {face.abs_error:.2e}")
        ch = integrate_ch_4d(fieldcfg, grid, workers=args.threads)
        rel = ch.abs_error / max(1.0, abs(ch.closed_form))
        record("ch_4d", rel <= 0.01, f"numeric {fmt(ch.numeric)} rel err {rel:.4%}")
        cs = chern_simons_consistency(fieldcfg, grid, workers=args.threads)
        record("chern_simons", cs.details["consistent"], f"lhs {fmt(cs.numeric)} rhs {fmt(cs.closed_form)}")

    width = max(len(name) for name, _, _ in results)
    lines_out = []
    all_ok = True
    for name, ok, detail in results:
        stamp = "PASS" if ok else "FAIL"
        all_ok &= ok
        lines_out.append(f"{name:<{width}}  {stamp}  {detail}".rstrip())
    _emit("\n".join(lines_out) + "\n", args.out)
    return EXIT_OK if all_ok else EXIT_TOLERANCE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calindex",
        description="Index, eta and Nahm-profile computations for caloron boundary data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="JSON boundary-data document")
        else:
            p.add_argument("--config", help="JSON boundary-data document")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", help="write output to a file instead of stdout")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--grid", type=int, help="override the 3D grid resolution")

    p = sub.add_parser("index", help="closed-form index breakdown at shift t")
    common(p)
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("fredholm", help="Fredholm test at shift t")
    common(p)
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(func=cmd_fredholm)

    p = sub.add_parser("eta", help="eta limit and the index identity at shift t")
    common(p)
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("nahm", help="rank profile table over [t_min, t_max]")
    common(p)
    p.add_argument("--t-min", type=float, required=True, dest="t_min")
    p.add_argument("--t-max", type=float, required=True, dest="t_max")
    p.add_argument("--plot", help="write a step-plot image to this path")
    p.set_defaults(func=cmd_nahm)

    p = sub.add_parser("degree", help="winding-number quadrature of a clutching map")
    common(p, needs_config=False)
    p.add_argument("d", type=int, help="requested degree")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("charge", help="4D Chern character quadrature")
    common(p)
    p.set_defaults(func=cmd_charge)

    p = sub.add_parser("verify", help="identity suites plus the numeric quadrature suite")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotFredholm as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_FREDHOLM
    except (ConfigError, CalindexError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
