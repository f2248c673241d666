import logging

import click


# ANSI color codes for terminal output
class Colors:
    RESET = "\033[0m"
    BOLD = "\033[1m"
    UNDERLINE = "\033[4m"

    # Foreground colors
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BLUE = "\033[34m"
    MAGENTA = "\033[35m"
    CYAN = "\033[36m"


LEVEL_NAMES = {logging.WARNING: "WARN"}


def configure_logging(level: str):
    """Root logger with the bracketed level prefix, e.g. "[WARN] message"."""
    for number, name in LEVEL_NAMES.items():
        logging.addLevelName(number, name)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="[%(levelname)s] %(message)s",
        force=True,
    )


def display_summary(label, rows, color=Colors.CYAN):
    """Print a labelled block of key/value rows to stderr, leaving stdout for records."""
    try:
        click.echo(f"\n{color}{Colors.BOLD}{'-' * 10} {label} {'-' * 10}{Colors.RESET}", err=True)
        for key, value in rows:
            click.echo(f"  {key}: {value}", err=True)
        click.echo("-" * (22 + len(label)), err=True)
    except Exception as e:
        logging.getLogger(__name__).warning("could not display summary: %s", e)


def verdict_color(ok: bool) -> str:
    return Colors.GREEN if ok else Colors.YELLOW
