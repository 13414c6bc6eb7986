"""Worked-example families: closed forms side by side with the full pipeline.

Every family maps a parameter point to one flat row. Column order is fixed
by ``Family.columns`` and is what the CLI writes.

example1   pure two-path state with branch overlap c_u, detector overlap c_d
werner     two-qubit Werner state with detector overlap magnitude x
threepath  three-path state with <d_2|d_1> = 1/3
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .interferometer import DetectorConfig, two_path
from .relations import eval_priors, eval_th1, eval_th3
from .states import example1_state, threepath_example_state, werner

AGREEMENT_TOL = 1e-9


def example1_lhs(p, c_u, c_d):
    return 0.25 + p * (1 - p) * (c_u - 1) * (c_d - 1)


def example1_rhs(p, c_u, c_d):
    return 0.25 + p * (1 - p) * (1 - c_d)


def werner_lhs_entangled(p, x):
    """Entangled-branch expression, valid for p >= 1/3."""
    return 5 / 16 - x**2 / 4 + (9 * p**2 - 6 * p) / 16


def werner_lhs_branch(p, x):
    """Same LHS with the concurrence clipped at zero below p = 1/3."""
    c = max(0.0, (3 * p - 1) / 2)
    return 0.25 - x**2 / 4 + c**2 / 4


def werner_rhs(p, x):
    return 5 / 8 - p**2 * (1 + 2 * x**2) / 8


def threepath_v2(p, q):
    return 8 * p * q / 3**6


def threepath_x2(p, q):
    return 4 * p * q / 3**6


THREEPATH_GRAM = np.array([[1, 1 / 3, 0], [1 / 3, 1, 0], [0, 0, 1]], dtype=np.complex128)


def _example1_row(p, c_u, c_d):
    rep = eval_th3(example1_state(p, c_u), two_path(np.sqrt(c_d)))
    lhs_c, rhs_c = example1_lhs(p, c_u, c_d), example1_rhs(p, c_u, c_d)
    comp = rep.components
    return {
        "p": p, "c_u": c_u, "c_d": c_d,
        "lhs_closed": lhs_c, "rhs_closed": rhs_c,
        "lhs": rep.lhs, "rhs": rep.rhs,
        "lhs_diff": abs(rep.lhs - lhs_c), "rhs_diff": abs(rep.rhs - rhs_c),
        "residual": rep.residual,
        "pd2": comp["pd2"], "v2": comp["v2"], "e2": comp["e2"], "purity_ab": comp["purity_ab"],
    }


def _werner_row(p, x):
    rep = eval_th3(werner(p), two_path(x))
    entangled = p >= 1 / 3
    lhs_c = werner_lhs_entangled(p, x) if entangled else werner_lhs_branch(p, x)
    rhs_c = werner_rhs(p, x)
    comp = rep.components
    return {
        "p": p, "x": x, "branch": "entangled" if entangled else "separable",
        "lhs_entangled": werner_lhs_entangled(p, x), "lhs_closed": lhs_c, "rhs_closed": rhs_c,
        "lhs": rep.lhs, "rhs": rep.rhs,
        "lhs_diff": abs(rep.lhs - lhs_c), "rhs_diff": abs(rep.rhs - rhs_c),
        "residual": rep.residual,
        "pd2": comp["pd2"], "v2": comp["v2"], "e2": comp["e2"], "purity_ab": comp["purity_ab"],
    }


def _threepath_row(p, q):
    state = threepath_example_state(p, q)
    det = DetectorConfig(THREEPATH_GRAM)
    th1 = eval_th1(state, det)
    _, eq2 = eval_priors(state, det)
    v2c, x2c = threepath_v2(p, q), threepath_x2(p, q)
    v2, x2 = th1.components["v2"], eq2.components["x2"]
    return {
        "p": p, "q": q,
        "v2_closed": v2c, "x2_closed": x2c, "v2": v2, "x2": x2,
        "v2_diff": abs(v2 - v2c), "x2_diff": abs(x2 - x2c),
        "th1_lhs": th1.lhs, "th1_rhs": th1.rhs, "eq2_lhs": eq2.lhs, "eq2_rhs": eq2.rhs,
        "pd2": th1.components["pd2"],
    }


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple
    default_grid: dict
    row: Callable
    columns: tuple
    diff_columns: tuple

    def evaluate(self, point: dict) -> dict:
        return self.row(*(float(point[k]) for k in self.params))


_E1_COLS = ("p", "c_u", "c_d", "lhs_closed", "rhs_closed", "lhs", "rhs", "lhs_diff", "rhs_diff",
            "residual", "pd2", "v2", "e2", "purity_ab")
_W_COLS = ("p", "x", "branch", "lhs_entangled", "lhs_closed", "rhs_closed", "lhs", "rhs", "lhs_diff",
           "rhs_diff", "residual", "pd2", "v2", "e2", "purity_ab")
_T_COLS = ("p", "q", "v2_closed", "x2_closed", "v2", "x2", "v2_diff", "x2_diff", "th1_lhs",
           "th1_rhs", "eq2_lhs", "eq2_rhs", "pd2")

FAMILIES = {
    "example1": Family(
        "example1", ("p", "c_u", "c_d"),
        {"p": np.linspace(0, 1, 51), "c_d": np.linspace(0, 1, 51), "c_u": np.linspace(0, 1, 5)},
        _example1_row, _E1_COLS, ("lhs_diff", "rhs_diff")),
    "werner": Family(
        "werner", ("p", "x"),
        {"p": np.linspace(0, 1, 101), "x": np.linspace(0, 1, 101)},
        _werner_row, _W_COLS, ("lhs_diff", "rhs_diff")),
    "threepath": Family(
        "threepath", ("p", "q"),
        {"p": np.linspace(0, 1, 21), "q": np.linspace(0, 1, 21)},
        _threepath_row, _T_COLS, ("v2_diff", "x2_diff")),
}


def grid_points(family: Family, grid: dict):
    """Cartesian product over the family's parameters, first parameter slowest."""
    axes = [np.atleast_1d(np.asarray(grid[k], dtype=float)) for k in family.params]
    mesh = np.meshgrid(*axes, indexing="ij")
    flat = [m.ravel() for m in mesh]
    for vals in zip(*flat):
        yield dict(zip(family.params, vals))


def run_family(name: str, grid: dict | None = None) -> list[dict]:
    fam = FAMILIES[name]
    g = dict(fam.default_grid)
    g.update(grid or {})
    return [fam.evaluate(pt) for pt in grid_points(fam, g)]
