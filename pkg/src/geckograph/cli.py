"""Command-line front door: render, diff, terminal play, the HTTP service,
and level-file verification.

Exit codes: 0 success, 1 domain errors (bad type strings, unreadable level
files, rendering overflow), 2 usage errors.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click

from geckograph.game import (
    BudgetExceeded,
    GameEngine,
    LevelFormatError,
    NoSkipsRemaining,
    load_levels,
    solvability_oracle,
)
from geckograph.layout import layout
from geckograph.render import RenderOptions, WidthOverflow, to_ansi, to_svg
from geckograph.syntax import ParseError, parse_scheme, print_scheme
from geckograph.typediff import annotate, diff


def _parse_or_die(text: str):
    try:
        return parse_scheme(text)
    except ParseError as e:
        raise click.ClickException(f"cannot parse {text!r}: {e.message} at offset {e.offset}")


@click.group()
def main() -> None:
    """Graphical notation for polymorphic type signatures, and the
    ZeroToHero type-composition game."""


@main.command()
@click.argument("type_text", metavar="TYPE")
@click.option("--format", "fmt", type=click.Choice(["svg", "ansi"]), default="svg")
@click.option("--mode", type=click.Choice(["full", "compact"]), default="full")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def render(type_text: str, fmt: str, mode: str, out: Optional[str]) -> None:
    """Render a type signature as SVG or 256-color ANSI art."""
    scheme = _parse_or_die(type_text)
    node = layout(scheme)
    options = RenderOptions(mode=mode)
    if fmt == "svg":
        text = to_svg(node, options)
    else:
        try:
            text = to_ansi(node, options)
        except WidthOverflow as e:
            raise click.ClickException(
                f"terminal too narrow: need {e.required} columns, have {e.available}"
            )
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command("diff")
@click.argument("left_text", metavar="LEFT")
@click.argument("right_text", metavar="RIGHT")
@click.option("--format", "fmt", type=click.Choice(["svg", "ansi", "json"]), default="json")
def diff_cmd(left_text: str, right_text: str, fmt: str) -> None:
    """Structurally compare two type signatures and report mismatch regions."""
    report = diff(_parse_or_die(left_text), _parse_or_die(right_text))
    if fmt == "json":
        click.echo(json.dumps(report.to_json(), indent=2))
        return
    lroot, rroot = annotate(report)
    if fmt == "svg":
        click.echo(to_svg(lroot), nl=False)
        click.echo(to_svg(rroot), nl=False)
        return
    try:
        click.echo(to_ansi(lroot), nl=False)
        click.echo(to_ansi(rroot), nl=False)
    except WidthOverflow as e:
        raise click.ClickException(
            f"terminal too narrow: need {e.required} columns, have {e.available}"
        )


def _load_levels_or_die(path: Optional[str]):
    try:
        return load_levels(path)
    except (FileNotFoundError, LevelFormatError) as e:
        raise click.ClickException(str(e))


def _show_level(engine: GameEngine, sess, level, gecko: bool) -> None:
    click.echo(f"\n=== Level {level.number}: {level.title} ===")
    click.echo(f"target   {level.target_text.split('::', 1)[1].strip()}")
    if gecko:
        click.echo(to_ansi(layout(level.target), RenderOptions(mode="full")), nl=False)
    click.echo("available:")
    for name, text in level.available_texts:
        click.echo(f"  {name} :: {text}")
        if gecko:
            click.echo(to_ansi(layout(parse_scheme(text)), RenderOptions(mode="compact")), nl=False)
    click.echo(f"skips remaining: {sess.skips_remaining}   (:skip to bypass, :quit to stop)")


def _show_attempt(level, result) -> None:
    if result.status == "success":
        click.echo("correct!")
        return
    click.echo(f"status: {result.status}")
    if result.inferred is not None:
        target = level.target_text.split("::", 1)[1].strip()
        inferred = print_scheme(result.inferred)
        click.echo(f"  target   {target}")
        click.echo(f"  inferred {inferred}")
        if result.diff_report is not None:
            # crude positional marker row under the first mismatch region
            marks = [" "] * max(len(target), len(inferred))
            for region in result.diff_report.regions:
                start = 0
                for k in range(min(len(target), len(inferred))):
                    if target[k : k + 1] != inferred[k : k + 1]:
                        start = k
                        break
                marks[start] = "^"
            click.echo("           " + "".join(marks).rstrip())
    if result.diagnostics is not None:
        click.echo(f"  {json.dumps(result.diagnostics)}")


@main.command()
@click.option("--levels", "level_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--gecko", type=click.Choice(["on", "off", "study"]), default="on")
def play(level_path: Optional[str], gecko: str) -> None:
    """Play ZeroToHero in the terminal."""
    levels = _load_levels_or_die(level_path)
    engine = GameEngine(levels, always_on_gecko=(gecko == "on"))
    group = 1 if gecko != "study" else None
    sess = engine.create_session(group=group)
    if gecko == "off":
        engine.always_on_gecko = False
        sess.group = 0  # neither parity matches: graphics never shown
    while not sess.is_complete(len(levels)):
        level = engine.current_level(sess)
        shown = gecko != "off" and engine.gecko_shown(sess, level.number)
        _show_level(engine, sess, level, shown)
        line = click.prompt("zeroToHero", prompt_suffix="> ", default="", show_default=False)
        line = line.strip()
        if line in (":quit", ":q"):
            break
        if not line:
            continue
        if line == ":skip":
            try:
                engine.skip(sess.id)
            except NoSkipsRemaining:
                click.echo("no skips remaining")
            continue
        result = engine.attempt(sess.id, line)
        _show_attempt(level, result)
    if sess.is_complete(len(levels)):
        click.echo("\nall levels complete!")
        for rec in sess.per_level:
            click.echo(
                f"  level {rec.level}: {rec.outcome} "
                f"({rec.attempts} attempts, {rec.elapsed:.1f}s)"
            )


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--host", envvar="GECKOGRAPH_HOST", default=None)
@click.option("--port", type=int, envvar="GECKOGRAPH_PORT", default=None)
@click.option("--levels", "level_path", envvar="GECKOGRAPH_LEVELS", default=None)
def serve(config_path, host, port, level_path) -> None:
    """Run the HTTP service."""
    from geckograph.service import ApiConfig, run

    config = ApiConfig()
    if config_path:
        raw = json.loads(open(config_path).read())
        config = ApiConfig(**raw)
    if host:
        config.host = host
    if port:
        config.port = port
    if level_path:
        config.level_path = level_path
    try:
        config.validate()
    except FileNotFoundError as e:
        raise click.ClickException(f"missing path: {e}")
    run(config)


@main.command("verify-levels")
@click.option("--levels", "level_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--max-depth", type=int, default=8, show_default=True)
def verify_levels(level_path: Optional[str], max_depth: int) -> None:
    """Check every level: does the printed solution typecheck, and is the
    level solvable at all within the depth bound?"""
    levels = _load_levels_or_die(level_path)
    flagged = []
    for level in levels:
        try:
            witness = solvability_oracle(level, max_depth=max_depth)
        except BudgetExceeded as e:
            witness = None
            click.echo(f"level {level.number:2}: budget exceeded after {e.explored} terms")
        solution = "verified" if level.solution_verified else "FLAGGED"
        solvable = f"solvable at depth {witness.depth}" if witness else "no witness found"
        click.echo(f"level {level.number:2}: solution {solution:9} | {solvable}")
        if witness:
            click.echo(f"           witness: {witness.code}")
        if not level.solution_verified:
            flagged.append(level.number)
    if flagged:
        click.echo(f"printed solutions inconsistent as shipped: levels {flagged}")


if __name__ == "__main__":
    sys.exit(main())
