"""Line-oriented text format for diagnosis problem instances.

Grammar (``#`` starts a comment, blank lines are ignored)::

    DPI <name>                       optional header
    COMPONENTS
        <name> [<name> ...]          one or more lines
    BEHAVIOR
        <component>: <sentence>      exactly one per component
    BACKGROUND                       optional section
        <sentence>
    OBS                              optional section
        <sentence>
    MEAS                             optional section
        <sentence>
    RATES                            optional section
        <component>: <float in (0,1)>

Sentences use the infix syntax of :mod:`diagkit.formula`. ``print_dpi``
emits the canonical form, and ``parse_dpi(print_dpi(d))`` reproduces ``d``
exactly; parse errors carry 1-based line/column locations.
"""

from __future__ import annotations

from .errors import DpiFormatError
from .formula import Sentence, parse_sentence, to_text
from .model import DPI, ComponentId, FailureRates, validate_dpi
from .reasoner import ConsistencyOracle, SatOracle

__all__ = ["parse_dpi", "print_dpi", "SECTIONS"]

SECTIONS = ("COMPONENTS", "BEHAVIOR", "BACKGROUND", "OBS", "MEAS", "RATES")


def _is_name(token: str) -> bool:
    return token and (token[0].isalpha() or token[0] == "_") \
        and all(ch.isalnum() or ch == "_" for ch in token)


def parse_dpi(text: str, oracle: ConsistencyOracle | None = None,
              validate: bool = True) -> DPI:
    """Parse and (by default) validate a ``.dpi`` document."""
    name = "unnamed"
    comp_names: list[str] = []
    comp_lines: dict[str, int] = {}
    behaviors: dict[str, Sentence] = {}
    background: list[Sentence] = []
    obs: list[Sentence] = []
    meas: list[Sentence] = []
    rates: dict[str, float] = {}

    section: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())

        if stripped.upper().startswith("DPI ") and section is None:
            name = stripped[4:].strip()
            # Instance names are labels, not atoms: hyphens and dots are fine.
            if not name or any(ch.isspace() for ch in name):
                raise DpiFormatError(f"invalid instance name {name!r}", lineno, 5)
            continue
        if stripped in SECTIONS:
            section = stripped
            continue
        if section is None:
            raise DpiFormatError(f"expected a section header, found {stripped!r}",
                                 lineno, indent + 1)

        if section == "COMPONENTS":
            for token in stripped.split():
                if not _is_name(token):
                    raise DpiFormatError(f"invalid component name {token!r}",
                                         lineno, line.index(token) + 1)
                if token in comp_lines:
                    raise DpiFormatError(f"duplicate component {token!r}",
                                         lineno, line.index(token) + 1)
                comp_lines[token] = lineno
                comp_names.append(token)
        elif section in ("BEHAVIOR", "RATES"):
            if ":" not in stripped:
                raise DpiFormatError("expected '<component>: ...'", lineno, indent + 1)
            comp, _, rest = stripped.partition(":")
            comp = comp.strip()
            if comp not in comp_lines:
                raise DpiFormatError(f"unknown component {comp!r}", lineno, indent + 1)
            value_col = line.index(":") + 2
            if section == "BEHAVIOR":
                if comp in behaviors:
                    raise DpiFormatError(f"duplicate behavior for {comp!r}",
                                         lineno, indent + 1)
                behaviors[comp] = parse_sentence(rest, lineno, value_col)
            else:
                try:
                    rate = float(rest.strip())
                except ValueError:
                    raise DpiFormatError(f"invalid rate {rest.strip()!r}",
                                         lineno, value_col) from None
                if not 0.0 < rate < 1.0:
                    raise DpiFormatError(
                        f"rate {rate} outside the open interval (0, 1)",
                        lineno, value_col)
                rates[comp] = rate
        else:
            sentence = parse_sentence(stripped, lineno, indent + 1)
            {"BACKGROUND": background, "OBS": obs, "MEAS": meas}[section].append(sentence)

    if not comp_names:
        raise DpiFormatError("no COMPONENTS section")
    missing = [c for c in comp_names if c not in behaviors]
    if missing:
        raise DpiFormatError(f"missing behavior for component(s): {', '.join(missing)}")
    if rates and set(rates) != set(comp_names):
        missing_rates = [c for c in comp_names if c not in rates]
        raise DpiFormatError(f"RATES must cover every component; missing: "
                             f"{', '.join(missing_rates)}")

    comps = tuple(ComponentId(i, c) for i, c in enumerate(comp_names))
    dpi = DPI(
        name=name,
        comps=comps,
        behaviors=tuple(behaviors[c] for c in comp_names),
        background=tuple(background),
        obs=tuple(obs),
        meas=tuple(meas),
        rates=FailureRates(tuple(rates[c] for c in comp_names)) if rates else None,
    )
    if validate:
        try:
            validate_dpi(dpi, oracle or SatOracle())
        except ValueError as exc:
            raise DpiFormatError(str(exc)) from None
    return dpi


def print_dpi(dpi: DPI) -> str:
    """Canonical text rendering; inverse of ``parse_dpi``."""
    lines = [f"DPI {dpi.name}", "", "COMPONENTS",
             "  " + " ".join(c.name for c in dpi.comps), "", "BEHAVIOR"]
    for comp, behavior in zip(dpi.comps, dpi.behaviors):
        lines.append(f"  {comp.name}: {to_text(behavior)}")
    for section, sentences in (("BACKGROUND", dpi.background), ("OBS", dpi.obs),
                               ("MEAS", dpi.meas)):
        if sentences:
            lines.append("")
            lines.append(section)
            lines.extend(f"  {to_text(s)}" for s in sentences)
    if dpi.rates is not None:
        lines.append("")
        lines.append("RATES")
        lines.extend(f"  {comp.name}: {rate!r}"
                     for comp, rate in zip(dpi.comps, dpi.rates.values))
    return "\n".join(lines) + "\n"
