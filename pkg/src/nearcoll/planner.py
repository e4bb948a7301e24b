"""Leading-order query complexities of the near-collision methods, and table rendering.

Every estimate is a base-2 exponent without the constant factors of
random-mapping theory; ``search.bench`` puts those back when comparing with
measurements.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional

from .combinatorics import ball_volume, log2_int, optimal_mu_approx, optimal_mu_exact
from .covering_code import build_code, fiber_distance_distribution

__all__ = [
    "Method",
    "ComplexityEstimate",
    "cx_plain",
    "cx_A",
    "cx_B",
    "cx_C",
    "cx_D",
    "cx_E",
    "estimate",
    "round1",
    "render_table1",
    "render_table3",
    "table1_csv",
    "table3_csv",
    "tables_json",
    "format_pretty",
    "lower_bound_violations",
]


class Method(str, enum.Enum):
    PLAIN = "plain"
    A = "A"  # truncate 2*eps + 1 bits
    B = "B"  # truncate the optimal mu(eps) bits
    C = "C"  # table-based birthday search
    D = "D"  # Hamming direct-sum covering code
    E = "E"  # lower bound for any balanced compression


METHODS = (Method.A, Method.B, Method.C, Method.D, Method.E)


@dataclass(frozen=True)
class ComplexityEstimate:
    method: Method
    n: int
    eps: int
    log2_queries: float
    params: dict = field(default_factory=dict)


def _check(n: int, eps: int):
    if n < 1 or eps < 0:
        raise ValueError("need n >= 1 and eps >= 0")


def cx_plain(n: int, eps: int) -> ComplexityEstimate:
    _check(n, eps)
    if eps >= n:
        raise ValueError("plain truncation needs eps < n")
    return ComplexityEstimate(Method.PLAIN, n, eps, (n - eps) / 2, {"mu": eps})


def cx_A(n: int, eps: int) -> ComplexityEstimate:
    _check(n, eps)
    if eps < 1 or 2 * eps + 1 >= n:
        raise ValueError("method A needs eps >= 1 and 2*eps + 1 < n")
    return ComplexityEstimate(Method.A, n, eps, (n + 1) / 2 - eps, {"mu": 2 * eps + 1})


def cx_B(n: int, eps: int) -> ComplexityEstimate:
    _check(n, eps)
    if eps < 1:
        raise ValueError("method B needs eps >= 1")
    mu = optimal_mu_exact(eps).mode
    if mu >= n:
        raise ValueError(f"optimal truncation mu={mu} does not fit in n={n}")
    return ComplexityEstimate(Method.B, n, eps, (n + mu) / 2 - log2_int(ball_volume(mu, eps)), {"mu": mu})


def cx_C(n: int, eps: int) -> ComplexityEstimate:
    _check(n, eps)
    if eps >= n:
        raise ValueError("method C needs eps < n")
    return ComplexityEstimate(Method.C, n, eps, n / 2 - log2_int(ball_volume(n, eps)) / 2)


def cx_D(n: int, eps: int) -> ComplexityEstimate:
    """Covering-code method; odd eps runs the code for eps+1 until a run lands within eps."""
    _check(n, eps)
    if eps < 1:
        raise ValueError("method D needs eps >= 1")
    R = (eps + 1) // 2
    spec = build_code(n, R)
    base = spec.k / 2
    params = {"R": R, "ell": spec.ell, "r": spec.r}
    if eps % 2 == 0:
        return ComplexityEstimate(Method.D, n, eps, base, params)
    # a pair fails only when every block contributes distance 2
    dist = fiber_distance_distribution(spec)
    p = sum(pr for d, pr in dist.items() if d <= eps)
    repeats = -log2_int(p.numerator) + log2_int(p.denominator)
    return ComplexityEstimate(Method.D, n, eps, base + repeats, params)


def cx_E(n: int, eps: int) -> ComplexityEstimate:
    _check(n, eps)
    if not 1 <= eps < n / 2:
        raise ValueError("eps must satisfy eps < n/2 for bound E")
    radius = (eps + 1) // 2
    return ComplexityEstimate(Method.E, n, eps, n / 2 - log2_int(ball_volume(n, radius)) / 2, {"radius": radius})


_FUNCS = {Method.PLAIN: cx_plain, Method.A: cx_A, Method.B: cx_B, Method.C: cx_C, Method.D: cx_D, Method.E: cx_E}


def estimate(method, n: int, eps: int) -> ComplexityEstimate:
    return _FUNCS[Method(method)](n, eps)


def round1(x: float) -> Decimal:
    """One decimal, halves rounded away from zero (as printed in the tables)."""
    return Decimal(x).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


def render_table1(eps_list: Iterable[int]) -> list[dict]:
    rows = []
    for eps in eps_list:
        res = optimal_mu_exact(eps)
        rows.append({"eps": eps, "mu": res.mode, "mu_star": optimal_mu_approx(eps)})
    return rows


def render_table3(n_list: Iterable[int], eps_list: Iterable[int]) -> list[dict]:
    """One row per eps; cell ``(n, method)`` holds the exponent, or None when the method does not apply."""
    n_list = list(n_list)
    rows = []
    for eps in eps_list:
        cells: dict[tuple[int, str], Optional[float]] = {}
        for n in n_list:
            for m in METHODS:
                try:
                    cells[(n, m.value)] = estimate(m, n, eps).log2_queries
                except ValueError:
                    cells[(n, m.value)] = None
        rows.append({"eps": eps, "cells": cells})
    return rows


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else str(round1(x))


def table1_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "mu", "mu_star"])
    for r in rows:
        w.writerow([r["eps"], r["mu"], r["mu_star"]])
    return buf.getvalue()


def table3_csv(rows: list[dict], n_list: Iterable[int]) -> str:
    n_list = list(n_list)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps"] + [f"n{n}_{m.value}" for n in n_list for m in METHODS])
    for r in rows:
        w.writerow([r["eps"]] + [_fmt(r["cells"][(n, m.value)]) for n in n_list for m in METHODS])
    return buf.getvalue()


def tables_json(t1: list[dict], t3: Optional[list[dict]], n_list: Iterable[int] = ()) -> str:
    doc: dict = {"table1": t1}
    if t3 is not None:
        doc["table3"] = [
            {
                "eps": r["eps"],
                "n": {str(n): {m.value: r["cells"][(n, m.value)] for m in METHODS} for n in n_list},
            }
            for r in t3
        ]
    return json.dumps(doc, indent=2, sort_keys=True)


def format_pretty(t1: list[dict], t3: Optional[list[dict]], n_list: Iterable[int] = ()) -> str:
    n_list = list(n_list)
    lines = ["Optimal truncation width", "", f"{'eps':>5} {'mu':>6} {'mu*':>6}"]
    lines += [f"{r['eps']:>5} {r['mu']:>6} {r['mu_star']:>6}" for r in t1]
    if t3 is not None:
        lines += ["", "log2 query complexity (A..E per n)", ""]
        head = f"{'eps':>5}"
        for n in n_list:
            head += "  " + " ".join(f"{f'{n}/{m.value}':>7}" for m in METHODS)
        lines.append(head)
        for r in t3:
            line = f"{r['eps']:>5}"
            for n in n_list:
                line += "  " + " ".join(f"{_fmt(r['cells'][(n, m.value)]) or '-':>7}" for m in METHODS)
            lines.append(line)
    return "\n".join(lines) + "\n"


def lower_bound_violations(n_list: Iterable[int], eps_list: Iterable[int]) -> list[tuple]:
    """Cells where (D) or (B) falls below the bound (E); empty when the ordering holds."""
    bad = []
    for n in n_list:
        for eps in eps_list:
            e = cx_E(n, eps).log2_queries
            for m in (Method.B, Method.D):
                v = estimate(m, n, eps).log2_queries
                if v < e:
                    bad.append((n, eps, m.value, v, e))
    return bad

