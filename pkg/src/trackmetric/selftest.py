"""Golden-value self checks runnable from the CLI.

Each check reproduces one published table or worked example with the default
parameters (p=1, c=80, delta=alpha=10, epsilon=1, eta=5, beta=1000) and
reports pass or fail; the test suite asserts the same values with the full
tolerance story.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .assign import INFEASIBLE, greedy_many_to_one
from .core import Direction, MetricParams
from .ospa import ospa_per_scan
from .ospamt import Mode, directional_cost, directional_distance, ospamt_metric, split_tracks
from .ospat import ospat_per_scan
from .scenarios import FigureId, ScenarioSpec, build

_TOL = 1e-9


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=_TOL, abs_tol=1e-12)


def check_example2() -> tuple[bool, str]:
    """Four candidate assignments of the broken-track scenario."""
    params = MetricParams()
    e, d, c = 1.0, params.delta, params.c
    sc = build(ScenarioSpec(FigureId.FIG1A, epsilon=e))
    truth, est = sc.truth, sc.est
    a1 = directional_cost(est, truth, (1, 1), ((1, 2),), params)
    a2 = directional_cost(est, truth, (1, 1), ((2, 1),), params)
    a3, _, _ = directional_distance(est, truth, (0, 1), params)
    a4, _, _ = directional_distance(est, truth, (1, 0), params)
    report = ospamt_metric(truth, est, params, mode=Mode.EXACT)
    want = (
        (5 * e + 2 * d) / 5,
        (5 * e + 3 * d) / 5,
        (2 * e + 3 * c) / 5,
        (3 * e + 2 * c) / 5,
    )
    ok = (
        all(_close(x, w) for x, w in zip((a1, a2, a3, a4), want))
        and _close(report.total, want[0])
        and report.assignment.source_to_target == (1, 1)
    )
    return ok, f"A1={a1} A2={a2} A3={a3} A4={a4} total={report.total}"


def check_table1() -> tuple[bool, str]:
    """Per-scan distances at t=1 for the crossover and near-miss scenarios."""
    params = MetricParams()
    e, h, c, alpha = 1.0, 5.0, params.c, params.alpha
    got: list[float] = []
    want: list[float] = []
    for fig, expected in (
        (FigureId.FIG9A, (e, min((alpha**params.p + e**params.p) ** (1 / params.p), c), c)),
        (FigureId.FIG9B, (h, h, h)),
    ):
        sc = build(ScenarioSpec(fig, epsilon=e, eta=h))
        ospa_rows = ospa_per_scan(sc.truth, sc.est, params)
        ospat_rows, _ = ospat_per_scan(sc.truth, sc.est, params)
        report = ospamt_metric(sc.truth, sc.est, params, mode=Mode.EXACT)
        got += [ospa_rows[0].total, ospat_rows[0].total, report.per_time[0]]
        want += list(expected)
    ok = all(_close(g, w) for g, w in zip(got, want))
    return ok, f"got={got} want={want}"


def check_table2() -> tuple[bool, str]:
    """Optimal pairings at t=1 and t=5 of the broken-track scenario."""
    params = MetricParams()
    sc = build(ScenarioSpec(FigureId.FIG1A))
    ospa_rows = ospa_per_scan(sc.truth, sc.est, params)
    ospat_rows, _ = ospat_per_scan(sc.truth, sc.est, params)
    report = ospamt_metric(sc.truth, sc.est, params, mode=Mode.EXACT)
    ok = (
        ospa_rows[0].pairs == ((1, 1),)
        and ospa_rows[4].pairs == ((1, 2),)
        and ospat_rows[0].pairs == ((1, 1),)
        and ospat_rows[4].pairs == ((1, 2),)
        and report.assignment.direction is Direction.EST_TO_TRUTH
        and report.assignment.orders == ((1, 2),)
    )
    return ok, (
        f"ospa t1={ospa_rows[0].pairs} t5={ospa_rows[4].pairs} "
        f"ospamt orders={report.assignment.orders}"
    )


def check_table3() -> tuple[bool, str]:
    """Identical per-scan curves but ordered totals for the false-track pair."""
    params = MetricParams()
    e, c, p = 1.0, params.c, params.p
    per_scan_want = (e, e, c, c)
    totals: list[float] = []
    ok = True
    for fig in (FigureId.FIG11A, FigureId.FIG11B):
        sc = build(ScenarioSpec(fig, epsilon=e))
        ospa_rows = ospa_per_scan(sc.truth, sc.est, params)
        ospat_rows, _ = ospat_per_scan(sc.truth, sc.est, params)
        report = ospamt_metric(sc.truth, sc.est, params, mode=Mode.EXACT)
        for rows in (
            [r.total for r in ospa_rows],
            [r.total for r in ospat_rows],
            list(report.per_time),
        ):
            ok = ok and all(_close(g, w) for g, w in zip(rows, per_scan_want))
        totals.append(report.total)
    want_a = ((e**p + c**p) / 2) ** (1 / p)
    want_b = ((e**p + 2 * c**p) / 3) ** (1 / p)
    ok = ok and _close(totals[0], want_a) and _close(totals[1], want_b)
    return ok, f"totals={totals} want=({want_a}, {want_b})"


def check_remark4() -> tuple[bool, str]:
    """The worked greedy matrices."""
    d = np.array(
        [
            [70.0, 80.0, 80.0, 80.0],
            [79.0, 80.0, 29.0, 80.0],
            [80.0, 50.0, 80.0, 55.0],
        ]
    )
    res = greedy_many_to_one(d, cutoff_row_col_value=80.0)
    inf = INFEASIBLE
    want_d1 = np.array(
        [[70, inf, inf, inf], [inf, inf, 29, inf], [inf, 50, inf, inf]]
    )
    want_d2 = np.array(
        [[70, inf, inf, inf], [inf, inf, 29, inf], [inf, 50, inf, 55]]
    )
    want_d3 = np.array(
        [[70, inf, inf, inf], [inf, inf, 29, inf], [inf, 50, inf, 55]]
    )
    want_d4 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 2]])
    ok = (
        np.array_equal(res.d1, want_d1)
        and np.array_equal(res.d2, want_d2)
        and np.array_equal(res.d3, want_d3)
        and np.array_equal(res.order_matrix, want_d4)
    )
    return ok, f"order_matrix={res.order_matrix.tolist()}"


def check_fig5_fig6_split() -> tuple[bool, str]:
    """Merged-track discrimination and the post-split improvement."""
    params = MetricParams()
    e, d, c = 1.0, params.delta, params.c
    sc5 = build(ScenarioSpec(FigureId.FIG5, epsilon=e))
    sc6 = build(ScenarioSpec(FigureId.FIG6, epsilon=e))
    r5 = ospamt_metric(sc5.truth, sc5.est, params, mode=Mode.EXACT)
    r6 = ospamt_metric(sc6.truth, sc6.est, params, mode=Mode.EXACT)
    split_est, log = split_tracks(sc5.truth, sc5.est, params, mode=Mode.EXACT)
    r5_split = ospamt_metric(sc5.truth, split_est, params, mode=Mode.EXACT)
    ok = (
        _close(r5.total, (5 * e + 2 * d) / 5)
        and _close(r6.total, (3 * e + 2 * c) / 5)
        and len(log) == 1
        and _close(r5_split.total, e)
    )
    return ok, f"fig5={r5.total} fig6={r6.total} after split={r5_split.total}"


CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("example-2 closed forms", check_example2),
    ("table I (fig 9, t=1)", check_table1),
    ("table II (fig 1a pairings)", check_table2),
    ("table III (fig 11 totals)", check_table3),
    ("remark 4 greedy matrices", check_remark4),
    ("fig 5/6 discrimination + split", check_fig5_fig6_split),
)


def run_selftest(verbose: bool = True) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok = all_ok and ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}" + ("" if ok else f"  [{detail}]"))
    return all_ok
