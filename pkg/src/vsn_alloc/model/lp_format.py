"""Dump a model in LP text format for cross-checking with external solvers."""

from __future__ import annotations

from pathlib import Path

from jinja2 import Environment, FileSystemLoader

from .milp import MilpModel, Sense

_TEMPLATE_DIR = Path(__file__).parent / "templates"

_SENSE_TEXT = {Sense.LE: "<=", Sense.EQ: "=", Sense.GE: ">="}


def lp_name(name: str) -> str:
    """``y[4,1,0]`` -> ``y(4,1,0)``; brackets are reserved in LP files."""
    return name.replace("[", "(").replace("]", ")")


def _num(value: float) -> str:
    return format(value, ".17g")


def _expr(terms: list[tuple[float, str]]) -> str:
    parts: list[str] = []
    for n, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = _num(abs(coef))
        if n == 0:
            parts.append(f"{'-' if coef < 0 else ''}{mag} {name}")
        else:
            parts.append(f"{sign} {mag} {name}")
    return " ".join(parts)


class LpWriter:
    """Renders :class:`MilpModel` instances through ``model.lp.j2``."""

    def __init__(self) -> None:
        self._jinja = Environment(
            loader=FileSystemLoader(str(_TEMPLATE_DIR)),
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def render(self, model: MilpModel, title: str = "vsn-alloc model") -> str:
        names = [lp_name(v.name) for v in model.variables]
        objective = _expr([(coef, names[idx]) for idx, coef in model.objective])
        if not objective:
            # LP files need a non-empty objective; any column with weight 0 will do.
            objective = f"0 {names[0]}" if names else "0"

        rows = []
        for con in model.constraints:
            if not con.terms:
                continue
            rows.append(
                {
                    "name": lp_name(con.tag),
                    "expr": _expr([(coef, names[idx]) for idx, coef in con.terms]),
                    "sense": _SENSE_TEXT[con.sense],
                    "rhs": _num(con.rhs),
                }
            )

        bounds = []
        for v, name in zip(model.variables, names):
            if v.lower == v.upper:
                bounds.append(f"{name} = {_num(v.lower)}")
            else:
                bounds.append(f"{_num(v.lower)} <= {name} <= {_num(v.upper)}")

        template = self._jinja.get_template("model.lp.j2")
        return template.render(
            title=title,
            routing=model.mode.name,
            n_vars=model.n_vars,
            n_rows=len(rows),
            objective=objective,
            rows=rows,
            bounds=bounds,
            generals=[name for v, name in zip(model.variables, names) if v.integral],
        )


def write_lp(model: MilpModel, path: str | Path | None = None) -> str:
    """Render *model* as LP text; also write it to *path* when given."""
    text = LpWriter().render(model)
    if path is not None:
        Path(path).write_text(text)
    return text
