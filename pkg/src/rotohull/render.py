"""Deterministic rendering of groups, pages and tables (markdown + JSON)."""

from __future__ import annotations

from .abelian import FGAbelianGroup, factorint
from .pointgroup import PointGroupReport
from .rotational import CohomologyTable, E2Page


def render_group(g, primary: bool = False) -> str:
    """Compact form: free part, then torsion with multiplicity exponents.

    The default groups the invariant-factor chain ("16^2+48^2"); with
    primary=True every factor is split into prime powers first ("3^2+16^4").
    """
    if isinstance(g, int):
        return str(g)
    if g.is_trivial:
        return "0"
    parts = []
    if g.free_rank == 1:
        parts.append("Z")
    elif g.free_rank > 1:
        parts.append(f"Z^{g.free_rank}")
    torsion = list(g.torsion)
    if primary:
        torsion = sorted(
            p ** e for d in torsion for p, e in factorint(d).items()
        )
    i = 0
    while i < len(torsion):
        d = torsion[i]
        j = i
        while j < len(torsion) and torsion[j] == d:
            j += 1
        parts.append(str(d) if j - i == 1 else f"{d}^{j - i}")
        i = j
    return "+".join(parts)


def group_to_json(g) -> dict | int:
    if isinstance(g, int):
        return g
    return {"free_rank": g.free_rank, "torsion": list(g.torsion)}


def group_from_json(data) -> FGAbelianGroup | int:
    if isinstance(data, int):
        return data
    return FGAbelianGroup(data["free_rank"], tuple(data["torsion"]))


def page_markdown(page: E2Page, primary: bool = False) -> str:
    header = "| k\\n | " + " | ".join(str(n) for n in range(page.n_max + 1)) + " |"
    sep = "|" + "---|" * (page.n_max + 2)
    lines = [header, sep]
    for k in range(page.k_max, -1, -1):
        cells = [render_group(page.cell(n, k), primary) for n in range(page.n_max + 1)]
        lines.append(f"| {k} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def page_json(page: E2Page) -> dict:
    return {
        "model": page.model_name,
        "ring": page.ring,
        "fibration": page.fibration,
        "n_max": page.n_max,
        "k_max": page.k_max,
        "cells": [
            {"n": n, "k": k, "group": group_to_json(page.cell(n, k))}
            for k in range(page.k_max + 1)
            for n in range(page.n_max + 1)
        ],
    }


def table_markdown(table: CohomologyTable, primary: bool = False) -> str:
    lines = ["| n | H^n |", "|---|---|"]
    for n in sorted(table.by_degree):
        lines.append(f"| {n} | {render_group(table.degree(n), primary)} |")
    lines.append("")
    lines.append(f"status: {table.status}")
    if table.ambiguous_degrees:
        lines.append("ambiguous degrees: " + ", ".join(map(str, table.ambiguous_degrees)))
    for p, dims in sorted(table.fp_dims.items()):
        lines.append(f"F_{p} dimensions: " + ", ".join(map(str, dims)))
    for note in table.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def table_json(table: CohomologyTable) -> dict:
    return {
        "model": table.model_name,
        "ring": table.ring,
        "degrees": [
            {"n": n, "group": group_to_json(table.degree(n))}
            for n in sorted(table.by_degree)
        ],
        "status": table.status,
        "ambiguous_degrees": list(table.ambiguous_degrees),
        "fp_dims": {str(p): dims for p, dims in sorted(table.fp_dims.items())},
        "notes": list(table.notes),
    }


def column_markdown(values: dict, primary: bool = False) -> str:
    lines = ["| n | H^n |", "|---|---|"]
    for n in sorted(values):
        lines.append(f"| {n} | {render_group(values[n], primary)} |")
    return "\n".join(lines)


def column_json(group_name: str, module_name: str, ring: str, values: dict) -> dict:
    return {
        "group": group_name,
        "module": module_name,
        "ring": ring,
        "degrees": [
            {"n": n, "group": group_to_json(values[n])} for n in sorted(values)
        ],
    }


def ranks_markdown(ranks: list[int]) -> str:
    lines = ["| n | rank H^n |", "|---|---|"]
    for n, r in enumerate(ranks):
        lines.append(f"| {n} | {r} |")
    return "\n".join(lines)


def report_json(report: PointGroupReport) -> dict:
    return {
        "system": report.system_name,
        "dimension": report.dimension,
        "verdict": report.verdict,
        "group_order": report.group_order,
        "stabilization_index": report.stabilization_index,
        "table": [
            {
                "n": row["n"],
                "G": row["G"],
                "E": row["E"],
            }
            for row in report.n_table
        ],
        "notes": list(report.notes),
    }
