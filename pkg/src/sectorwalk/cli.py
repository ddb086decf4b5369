"""Command-line front end emitting plot-ready CSV tables and JSON reports.

All CSV output is UTF-8 with comma separators, 17-significant-digit
floats, LF line endings, and '#' metadata headers; identical invocations
(including seeds) produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
import sys
import traceback
from dataclasses import dataclass, field

import click
import numpy as np

from . import __version__, mc, recursion, support
from .core import WalkConfig
from .errors import ConvergenceError, DomainError, GridError
from .exact_two import ExactTwoStep
from .genchi2 import GenChi2Params
from .genchi2 import cdf as genchi2_cdf
from .genchi2 import pdf as genchi2_pdf
from .largen import LargeNModel

_FMT = "%.17g"


@dataclass
class RunSpec:
    """Resolved parameters of one CLI invocation, echoed into metadata."""

    subcommand: str
    params: dict = field(default_factory=dict)

    def metadata_lines(self):
        lines = [f"# command={self.subcommand}", f"# version={__version__}"]
        for key, val in self.params.items():
            if isinstance(val, float):
                val = _FMT % val
            lines.append(f"# {key}={val}")
        return lines


def _write_csv(stream, spec: RunSpec, columns, rows):
    for line in spec.metadata_lines():
        stream.write(line + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_FMT % v if isinstance(v, float) else str(v) for v in row) + "\n")


def _write_json(stream, spec: RunSpec, payload: dict):
    doc = {"command": spec.subcommand, "version": __version__}
    doc.update(spec.params)
    doc.update(payload)
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def _open_output(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit_csv(path, spec, columns, rows):
    stream, close = _open_output(path)
    try:
        _write_csv(stream, spec, columns, rows)
    finally:
        if close:
            stream.close()


def _emit_json(path, spec, payload):
    stream, close = _open_output(path)
    try:
        _write_json(stream, spec, payload)
    finally:
        if close:
            stream.close()


def _derived_path(base, suffix):
    if base is None or base == "-":
        return None
    root, ext = os.path.splitext(base)
    return f"{root}_{suffix}{ext or '.csv'}"


def _load_config(ctx, param, value):
    if value is None:
        return None
    with open(value, "r", encoding="utf-8") as fh:
        defaults = json.load(fh)
    if not isinstance(defaults, dict):
        raise click.BadParameter("config file must contain a JSON object")
    ctx.default_map = ctx.default_map or {}
    for sub, opts in defaults.items():
        if isinstance(opts, dict):
            ctx.default_map.setdefault(sub, {}).update(opts)
    return value


def _default_threads():
    try:
        return max(1, int(os.environ.get("SECTORWALK_THREADS", "1")))
    except ValueError:
        return 1


@click.group()
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    expose_value=False,
    is_eager=True,
    help="JSON file with per-subcommand default flag values; explicit flags win.",
)
@click.version_option(version=__version__)
def main():
    """Distributions of a planar random walk with sector-restricted steps."""


@main.command()
@click.option("--a", "max_angle", type=float, required=True, help="Step-angle half-width.")
@click.option("--points", type=int, default=500, show_default=True)
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def exact2(max_angle, points, output):
    """Closed-form two-step tables: radius and angle CDF/PDF."""
    law = ExactTwoStep(max_angle=max_angle)
    rs = np.linspace(law.min_radius, 2.0, points)
    ths = np.linspace(-max_angle, max_angle, points)
    spec = RunSpec("exact2", {"n": 2, "a": max_angle, "points": points, "method": "closed-form-two-step"})
    rows = zip(
        rs.tolist(),
        law.pdf_radius(rs).tolist(),
        law.cdf_radius(rs).tolist(),
        ths.tolist(),
        law.pdf_angle(ths).tolist(),
        law.cdf_angle(ths).tolist(),
    )
    _emit_csv(output, spec, ["r", "pdf_radius", "cdf_radius", "theta", "pdf_angle", "cdf_angle"], rows)


@main.command(name="support")
@click.option("--n", "n_steps", type=int, required=True)
@click.option("--a", "max_angle", type=float, required=True)
@click.option("--points", type=int, default=512, show_default=True)
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def support_cmd(n_steps, max_angle, points, output):
    """Support boundary curves, minimum radius, and uniqueness verdict."""
    cfg = WalkConfig(n_steps=n_steps, max_angle=max_angle)
    r_min = support.min_radius(cfg)
    unique = support.is_radius_function_of_angle(cfg)
    params = {
        "n": n_steps,
        "a": max_angle,
        "points": points,
        "r_min": r_min,
        "unique": str(bool(unique)).lower(),
        "method": "boundary-geometry",
    }
    if n_steps >= 2:
        params["uniqueness_threshold"] = support.uniqueness_threshold(n_steps)
    spec = RunSpec("support", params)
    ts, inner_r, inner_t = support.inner_boundary_curve(cfg, points)
    outer_t = np.linspace(-max_angle, max_angle, points)
    rows = zip(
        ts.tolist(),
        inner_r.tolist(),
        inner_t.tolist(),
        [float(n_steps)] * points,
        outer_t.tolist(),
    )
    _emit_csv(
        output, spec, ["t", "radius_inner", "angle_inner", "radius_outer", "angle_outer"], rows
    )


@main.command()
@click.option("--n", "n_steps", type=int, required=True)
@click.option("--a", "max_angle", type=float, required=True)
@click.option("--grid-r", type=int, default=recursion.DEFAULT_GRID_SIZE, show_default=True)
@click.option("--grid-theta", type=int, default=recursion.DEFAULT_GRID_SIZE, show_default=True)
@click.option("--phi-nodes", type=int, default=recursion.DEFAULT_PHI_NODES, show_default=True)
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def recurse(n_steps, max_angle, grid_r, grid_theta, phi_nodes, output):
    """Recursive joint grid and marginals for a moderate number of steps."""
    cfg = WalkConfig(n_steps=n_steps, max_angle=max_angle)
    grid = recursion.compute_grid(cfg, grid_r, grid_theta, phi_nodes)
    base = {
        "n": n_steps,
        "a": max_angle,
        "grid_r": grid_r,
        "grid_theta": grid_theta,
        "phi_nodes": phi_nodes,
        "raw_mass": grid.raw_mass,
        "method": "grid-recursion",
    }
    joint_rows = (
        (float(r), float(t), float(grid.density[i, j]))
        for i, r in enumerate(grid.radii)
        for j, t in enumerate(grid.angles)
    )
    _emit_csv(output, RunSpec("recurse", base), ["r", "theta", "pdf"], joint_rows)
    radii, pdf_r = recursion.marginal_radius(grid)
    _emit_csv(
        _derived_path(output, "marginal_radius"),
        RunSpec("recurse", {**base, "table": "marginal_radius"}),
        ["r", "pdf"],
        zip(radii.tolist(), pdf_r.tolist()),
    )
    angles, pdf_t = recursion.marginal_angle(grid)
    _emit_csv(
        _derived_path(output, "marginal_angle"),
        RunSpec("recurse", {**base, "table": "marginal_angle"}),
        ["theta", "pdf"],
        zip(angles.tolist(), pdf_t.tolist()),
    )


@main.command()
@click.option("--n", "n_steps", type=int, required=True)
@click.option("--a", "max_angle", type=float, required=True)
@click.option("--points", type=int, default=500, show_default=True)
@click.option("--truncate/--no-truncate", default=False, show_default=True)
@click.option("--extended", is_flag=True, help="Allow a up to pi (formulas only, no support truncation).")
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def approx(n_steps, max_angle, points, truncate, extended, output):
    """Large-N approximation tables: radius, angle, and joint density."""
    model = LargeNModel(n_steps=n_steps, max_angle=max_angle, extended=extended)
    base = {
        "n": n_steps,
        "a": max_angle,
        "points": points,
        "truncate": str(bool(truncate)).lower(),
        "method": "large-n-approximation",
    }
    rs = np.linspace(0.0, float(n_steps), points)
    ths = np.linspace(-min(max_angle, math.pi / 2 - 1e-9), min(max_angle, math.pi / 2 - 1e-9), points)
    rows = zip(
        rs.tolist(),
        np.atleast_1d(model.pdf_radius(rs)).tolist(),
        np.atleast_1d(model.cdf_radius(rs)).tolist(),
        ths.tolist(),
        np.atleast_1d(model.pdf_angle(ths)).tolist(),
        np.atleast_1d(model.cdf_angle(ths)).tolist(),
    )
    _emit_csv(output, RunSpec("approx", base), ["r", "pdf_radius", "cdf_radius", "theta", "pdf_angle", "cdf_angle"], rows)
    n_joint = min(points, 100)
    rj = np.linspace(0.0, float(n_steps), n_joint)
    tj = np.linspace(-min(max_angle, math.pi / 2 - 1e-9), min(max_angle, math.pi / 2 - 1e-9), n_joint)
    dens = model.joint_pdf(rj[:, None], tj[None, :], truncate=truncate)
    joint_rows = (
        (float(rj[i]), float(tj[j]), float(dens[i, j]))
        for i in range(n_joint)
        for j in range(n_joint)
    )
    _emit_csv(
        _derived_path(output, "joint"),
        RunSpec("approx", {**base, "table": "joint"}),
        ["r", "theta", "pdf"],
        joint_rows,
    )


@main.command(name="genchi2")
@click.option("--weights", required=True, help="Comma-separated weights w_j.")
@click.option("--dofs", required=True, help="Comma-separated degrees of freedom k_j.")
@click.option("--noncentralities", required=True, help="Comma-separated noncentralities lambda_j.")
@click.option("--gaussian-sd", type=float, default=0.0, show_default=True)
@click.option("--offset", type=float, default=0.0, show_default=True)
@click.option("--x", "xs", required=True, help="Comma-separated evaluation points.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def genchi2_cmd(weights, dofs, noncentralities, gaussian_sd, offset, xs, fmt, output):
    """Spot values of a generalized chi-square CDF and PDF."""
    try:
        w = tuple(float(v) for v in weights.split(","))
        k = tuple(int(v) for v in dofs.split(","))
        lam = tuple(float(v) for v in noncentralities.split(","))
        x = np.asarray([float(v) for v in xs.split(",")])
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    params = GenChi2Params(
        weights=w, dofs=k, noncentralities=lam, gaussian_sd=gaussian_sd, offset=offset
    )
    cdf_vals = np.atleast_1d(genchi2_cdf(x, params))
    pdf_vals = np.atleast_1d(genchi2_pdf(x, params))
    spec = RunSpec(
        "genchi2",
        {
            "weights": weights,
            "dofs": dofs,
            "noncentralities": noncentralities,
            "gaussian_sd": gaussian_sd,
            "offset": offset,
            "method": "characteristic-function-inversion",
        },
    )
    if fmt == "json":
        payload = {
            "x": x.tolist(),
            "cdf": cdf_vals.tolist(),
            "pdf": pdf_vals.tolist(),
        }
        _emit_json(output, spec, payload)
    else:
        _emit_csv(output, spec, ["x", "cdf", "pdf"], zip(x.tolist(), cdf_vals.tolist(), pdf_vals.tolist()))


@main.command()
@click.option("--n", "n_steps", type=int, required=True)
@click.option("--a", "max_angle", type=float, required=True)
@click.option("--count", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bins", type=int, default=None, help="Emit histograms instead of raw samples.")
@click.option("--threads", type=int, default=None, help="Worker threads (default: SECTORWALK_THREADS or 1).")
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def sample(n_steps, max_angle, count, seed, bins, threads, output):
    """Monte-Carlo endpoint samples, raw or binned."""
    cfg = WalkConfig(n_steps=n_steps, max_angle=max_angle)
    batch = mc.sample_walk(cfg, count, seed, n_jobs=threads or _default_threads())
    base = {"n": n_steps, "a": max_angle, "count": count, "seed": seed, "method": "monte-carlo"}
    if bins:
        r_edges, r_density, r_counts = mc.histogram_density(batch.radii, bins)
        t_edges, t_density, t_counts = mc.histogram_density(batch.angles, bins)
        rows = zip(
            (0.5 * (r_edges[1:] + r_edges[:-1])).tolist(),
            r_density.tolist(),
            r_counts.tolist(),
            (0.5 * (t_edges[1:] + t_edges[:-1])).tolist(),
            t_density.tolist(),
            t_counts.tolist(),
        )
        _emit_csv(
            output,
            RunSpec("sample", {**base, "bins": bins}),
            ["radius_bin", "radius_density", "radius_count", "angle_bin", "angle_density", "angle_count"],
            rows,
        )
    else:
        _emit_csv(
            output,
            RunSpec("sample", base),
            ["radius", "angle"],
            zip(batch.radii.tolist(), batch.angles.tolist()),
        )


def _regime_cdfs(regime, cfg):
    """Radius and angle CDF callables for one analytic regime."""
    if regime == "exact2":
        law = ExactTwoStep.from_config(cfg)
        return law.cdf_radius, law.cdf_angle
    if regime == "recurse":
        if cfg.n_steps < 3:
            raise DomainError("compare --regime recurse requires n >= 3")
        prev = recursion.compute_grid(
            WalkConfig(cfg.n_steps - 1, cfg.max_angle)
        ) if cfg.n_steps > 3 else recursion.seed_two_step(WalkConfig(2, cfg.max_angle))
        radius_cdf = mc.tabulated_cdf(
            lambda r: recursion.cdf_radius_recursive(r, prev), 0.0, float(cfg.n_steps), 2001
        )
        angle_cdf = lambda t: recursion.cdf_angle_approx(t, prev)
        return radius_cdf, angle_cdf
    if regime == "approx":
        model = LargeNModel.from_config(cfg)
        radius_cdf = mc.tabulated_cdf(lambda r: model.cdf_radius(r), 0.0, float(cfg.n_steps), 4001)
        return radius_cdf, model.cdf_angle
    raise DomainError(f"unknown regime {regime!r}")


@main.command()
@click.option("--regime", type=click.Choice(["exact2", "recurse", "approx"]), required=True)
@click.option("--n", "n_steps", type=int, required=True)
@click.option("--a", "max_angle", type=float, required=True)
@click.option("--count", type=int, default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bins", type=int, default=200, show_default=True)
@click.option("--threads", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("-o", "--output", type=click.Path(writable=True, dir_okay=False), default=None)
def compare(regime, n_steps, max_angle, count, seed, bins, threads, fmt, output):
    """KS distances and histogram overlays of an analytic regime vs MC."""
    cfg = WalkConfig(n_steps=n_steps, max_angle=max_angle)
    radius_cdf, angle_cdf = _regime_cdfs(regime, cfg)
    batch = mc.sample_walk(cfg, count, seed, n_jobs=threads or _default_threads())
    ks_radius = mc.ks_distance(batch.radii, radius_cdf)
    ks_angle = mc.ks_distance(batch.angles, angle_cdf)
    base = {
        "regime": regime,
        "n": n_steps,
        "a": max_angle,
        "count": count,
        "seed": seed,
        "method": "ks-comparison",
    }
    spec = RunSpec("compare", base)
    if fmt == "json":
        _emit_json(output, spec, {"ks_radius": ks_radius, "ks_angle": ks_angle})
        return
    r_edges, r_density, _ = mc.histogram_density(batch.radii, bins)
    t_edges, t_density, _ = mc.histogram_density(batch.angles, bins)
    r_mid = 0.5 * (r_edges[1:] + r_edges[:-1])
    t_mid = 0.5 * (t_edges[1:] + t_edges[:-1])
    r_model = np.gradient(np.asarray(radius_cdf(r_mid), dtype=float), r_mid)
    t_model = np.gradient(np.asarray(angle_cdf(t_mid), dtype=float), t_mid)
    spec = RunSpec("compare", {**base, "ks_radius": ks_radius, "ks_angle": ks_angle})
    rows = zip(
        r_mid.tolist(),
        r_density.tolist(),
        r_model.tolist(),
        t_mid.tolist(),
        t_density.tolist(),
        t_model.tolist(),
    )
    _emit_csv(
        output,
        spec,
        ["radius_bin", "radius_mc_density", "radius_model_density", "angle_bin", "angle_mc_density", "angle_model_density"],
        rows,
    )


def entry_point(argv=None):
    """Console entry point with the documented exit-code contract."""
    try:
        return main.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    except (ConvergenceError, GridError) as exc:
        tb = traceback.extract_tb(exc.__traceback__)
        origin = "unknown"
        for frame in reversed(tb):
            name = os.path.splitext(os.path.basename(frame.filename))[0]
            if name not in ("cli",):
                origin = name
                break
        click.echo(f"error: {type(exc).__name__} in module '{origin}': {exc}", err=True)
        return 3


def run():
    sys.exit(entry_point())


if __name__ == "__main__":
    run()
