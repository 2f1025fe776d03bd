"""Deterministic CSV serialization for the harness.

Floats are written with 17 significant digits (round-trip exact); provenance
lines carry only the version and the config echo, never timestamps, so
identical configs produce identical bytes.
"""

from . import __version__

__all__ = ["format_value", "render_csv", "write_csv"]


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render_csv(command, config_items, header, rows):
    lines = [f"# fraclag {__version__}", f"# command={command}"]
    lines += [f"# {item}" for item in config_items]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
