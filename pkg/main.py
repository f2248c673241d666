"""
Command line for boundary dynamics on a once-punctured torus.

    python main.py gaps --depth 8
    python main.py classify --point 7/5
    python main.py expand --point "(1+1*sqrt(5))/2" --max-steps 12
    python main.py wander --point "(1+1*sqrt(13))/3" --depth 8 --mcg-bound 2 --cert cert.json

Records go to stdout, one JSON object per line; summaries and logs go to
stderr. Exit status is 0 on success, 2 when the answer is Unresolved or
NotFilling, and 1 on errors.
"""

import functools
import logging
import random
import sys
from fractions import Fraction

import click

from boundary_dynamics.analysis.dimension import (
    birman_series_dimension,
    discontinuity_report,
    limit_set_dimension,
    slope_model,
)
from boundary_dynamics.analysis.mcshane import mcshane_report
from boundary_dynamics.analysis.render import render_gaps, render_svg
from boundary_dynamics.analysis.serialization import gap_record, write_records
from boundary_dynamics.errors import BoundaryError, NotFillingWithinDepth, StepBudgetExceeded
from boundary_dynamics.exact_geometry.points import format_point, parse_point
from boundary_dynamics.loop_cutting.classify import Outcome, classify_point
from boundary_dynamics.loop_cutting.expansion import Terminal, derived_expansion, transcript_records, write_transcript
from boundary_dynamics.loop_cutting.gaps import enumerate_gaps
from boundary_dynamics.settings import get_settings
from boundary_dynamics.surface_model.surface import surface_from_settings
from boundary_dynamics.surface_model.tools import parabolic_point
from boundary_dynamics.topology.arcs import ArcSystem, filling_report
from boundary_dynamics.topology.wandering import (
    certificate_record,
    filling_density,
    first_filling_prefix,
    read_certificate,
    verify_certificate_record,
    wandering_certificate,
    write_certificate,
)
from report_utils import Colors, configure_logging, display_summary, verdict_color

logger = logging.getLogger("boundary_dynamics")

EXIT_UNRESOLVED = 2
EXIT_ERROR = 1


def handle_errors(command):
    """Turn library errors into exit status 1 with a logged message."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (BoundaryError, ValueError) as e:
            logger.error("%s: %s", type(e).__name__, e)
            sys.exit(EXIT_ERROR)

    return wrapper


@click.group()
@click.option("--surface", "surface_config", default=None, help="Surface config file (default: modular torus).")
@click.option("--seed", type=int, default=None, help="Seed for randomized sampling.")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.pass_context
def cli(ctx, surface_config, seed, log_level):
    settings = get_settings().with_overrides(surface_config=surface_config, seed=seed, log_level=log_level)
    configure_logging(settings.log_level)
    ctx.obj = {"settings": settings}


def _surface(ctx):
    if "surface" not in ctx.obj:
        ctx.obj["surface"] = surface_from_settings(ctx.obj["settings"].surface_config)
    return ctx.obj["surface"]


@cli.command()
@click.option("--depth", type=int, default=None, help="Word-length budget L.")
@click.option("--format", "output_format", type=click.Choice(["records", "svg"]), default="records")
@click.option("--out", default=None, help="Output file (default: stdout).")
@click.pass_context
@handle_errors
def gaps(ctx, depth, output_format, out):
    """Enumerate the gaps of one period at the cusp ∞."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    depth = settings.gap_budget if depth is None else depth
    found = enumerate_gaps(surface, depth, slack=settings.gap_slack)
    if output_format == "svg":
        if out:
            render_gaps(surface, out, depth, settings.gap_slack)
        else:
            click.echo(render_svg(surface, depth, gaps=found), nl=False)
    else:
        write_records((gap_record(item) for item in found), out)
    display_summary("Gaps", [("budget", depth), ("gaps", len(found))])


@cli.command()
@click.option("--point", required=True, help='Boundary point: "n/d", "inf", "(u+v*sqrt(d))/w" or a decimal.')
@click.option("--base", default="inf", help="Base cusp p.")
@click.option("--budget", type=int, default=None)
@click.pass_context
@handle_errors
def classify(ctx, point, base, budget):
    """Locate a point among the gaps of a cusp."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    p = parabolic_point(surface, parse_point(base))
    x = parse_point(point)
    result = classify_point(surface, p, x, budget=budget or settings.classify_budget,
                            convergents=settings.convergents, slack=settings.gap_slack,
                            depth=settings.cutting_depth)
    record = {"point": format_point(x), "base": format_point(p.point), "outcome": result.outcome.value}
    if result.outcome is Outcome.IN_GAP:
        record.update({
            "epsilon": result.epsilon,
            "q": format_point(result.q.point),
            "g": result.g.word,
            "interval": result.gap.interval(result.epsilon),
        })
    write_records([record])
    color = verdict_color(result.outcome is not Outcome.UNRESOLVED)
    display_summary("Classification", [("point", point), ("outcome", result.outcome.value)], color)
    if result.outcome is Outcome.UNRESOLVED:
        sys.exit(EXIT_UNRESOLVED)


@cli.command()
@click.option("--point", required=True)
@click.option("--max-steps", type=int, default=None)
@click.option("--transcript", default=None, help="Write the expansion transcript to this file.")
@click.pass_context
@handle_errors
def expand(ctx, point, max_steps, transcript):
    """Derived expansion of a point from the cusp ∞."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    expansion = derived_expansion(surface, parse_point(point), max_steps=max_steps or settings.max_steps,
                                  budget=settings.classify_budget, convergents=settings.convergents,
                                  slack=settings.gap_slack, depth=settings.cutting_depth)
    if transcript:
        write_transcript(expansion, transcript)
    write_records(transcript_records(expansion))
    display_summary("Expansion", [("steps", len(expansion)), ("terminal", expansion.terminal.value)])
    if expansion.terminal is Terminal.UNRESOLVED:
        sys.exit(EXIT_UNRESOLVED)


@cli.command()
@click.option("--point", required=True)
@click.option("--depth", type=int, default=16, help="Number of derived arcs to try.")
@click.pass_context
@handle_errors
def fill(ctx, point, depth):
    """Find the shortest filling prefix of the derived arcs of a point."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    try:
        expansion = derived_expansion(surface, parse_point(point), max_steps=depth,
                                      budget=settings.classify_budget, convergents=settings.convergents,
                                      slack=settings.gap_slack, depth=settings.cutting_depth)
    except StepBudgetExceeded as e:
        logger.warning("expansion stopped: %s", e)
        sys.exit(EXIT_UNRESOLVED)
    found = first_filling_prefix(surface, expansion, settings.cutting_depth)
    system = found[1] if found else ArcSystem.from_expansion(surface, expansion, len(expansion),
                                                              settings.cutting_depth)
    report = filling_report(system) if system.arcs else {"arcs": [], "filling": False}
    report["prefix"] = found[0] if found else None
    write_records([report])
    display_summary("Filling", [("prefix", report["prefix"]), ("filling", report["filling"])],
                    verdict_color(bool(found)))
    if not found:
        sys.exit(EXIT_UNRESOLVED)


@cli.command()
@click.option("--point", required=True)
@click.option("--depth", type=int, default=32)
@click.option("--mcg-bound", type=int, default=None, help="Twist-word length bound W.")
@click.option("--cert", default=None, help="Write the certificate to this file.")
@click.pass_context
@handle_errors
def wander(ctx, point, depth, mcg_bound, cert):
    """Build a wandering certificate for a point."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    try:
        certificate = wandering_certificate(surface, parse_point(point), depth=depth,
                                            bound=mcg_bound or settings.mcg_bound,
                                            cutting_depth=settings.cutting_depth, precision=settings.precision,
                                            budget=settings.classify_budget, convergents=settings.convergents,
                                            slack=settings.gap_slack)
    except NotFillingWithinDepth as e:
        logger.warning("%s", e)
        sys.exit(EXIT_UNRESOLVED)
    if cert:
        write_certificate(certificate, cert)
    write_records([certificate_record(certificate)])
    display_summary("Wandering certificate", [
        ("filling prefix", certificate.n),
        ("classes checked", len(certificate.verdicts)),
        ("neighborhood", str(certificate.neighborhood)),
    ], Colors.GREEN)


@cli.command()
@click.option("--cert", required=True)
@click.pass_context
@handle_errors
def verify(ctx, cert):
    """Re-check a certificate file from its recorded words."""
    ok = verify_certificate_record(_surface(ctx), read_certificate(cert), ctx.obj["settings"].precision)
    write_records([{"cert": cert, "verified": ok}])
    if not ok:
        sys.exit(EXIT_UNRESOLVED)


@cli.command()
@click.option("--samples", type=int, default=20)
@click.option("--depth", type=int, default=16)
@click.option("--max-denominator", type=int, default=60)
@click.pass_context
@handle_errors
def density(ctx, samples, depth, max_denominator):
    """Fraction of random rationals in one period whose derived arcs fill."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    rng = random.Random(settings.seed)
    width = int(surface.cusp_width)
    points = []
    for _ in range(samples):
        denominator = rng.randint(2, max_denominator)
        points.append(Fraction(rng.randrange(0, width * denominator), denominator))
    report = filling_density(surface, points, depth, settings.cutting_depth, budget=settings.classify_budget,
                             convergents=settings.convergents, slack=settings.gap_slack)
    report["points"] = [format_point(x) for x in points]
    write_records([report])


@cli.command()
@click.option("--depth", type=int, default=None)
@click.pass_context
@handle_errors
def mcshane(ctx, depth):
    """Gap widths per geodesic against 2/(1 + e^ℓ)."""
    settings = ctx.obj["settings"]
    report = mcshane_report(_surface(ctx), settings.gap_budget if depth is None else depth,
                            settings.gap_slack, settings.precision)
    write_records(report.records())
    display_summary("McShane", [("total", str(report.total)[:14]), ("identity sum", str(report.identity_sum)[:14]),
                                ("classes", len(report.classes))])


@cli.command()
@click.option("--set", "which", type=click.Choice(["birman-series", "limit-set"]), default="birman-series")
@click.option("--depth", type=int, default=None, help="Gap budget for the Birman-Series set.")
@click.option("--slope", default="0", help='Slope of γ for the limit set: an integer or "inf".')
@click.option("--word-depth", type=int, default=10)
@click.option("--levels", type=int, default=None)
@click.pass_context
@handle_errors
def dim(ctx, which, depth, slope, word_depth, levels):
    """Box-counting dimension estimates."""
    settings = ctx.obj["settings"]
    surface = _surface(ctx)
    if which == "birman-series":
        depth = settings.gap_budget if depth is None else depth
        report = birman_series_dimension(surface, depth, levels, settings.gap_slack)
        write_records(report.records(which))
    else:
        model = slope_model(surface, slope)
        report = limit_set_dimension(model, word_depth, levels or 24)
        write_records(report.records(f"{which}:{slope}") + [discontinuity_report(model)])
    display_summary("Dimension", [("set", which), ("estimate", f"{report.estimate:.4f}")])


@cli.command()
@click.option("--depth", type=int, default=None)
@click.option("--out", required=True)
@click.pass_context
@handle_errors
def render(ctx, depth, out):
    """Draw the gaps of one period as an SVG file."""
    settings = ctx.obj["settings"]
    path = render_gaps(_surface(ctx), out, settings.gap_budget if depth is None else depth, settings.gap_slack)
    display_summary("Render", [("file", path)])


if __name__ == "__main__":
    cli()
