"""Soft-vs-hard feasibility timing on block-diagonal first-order families.

The benchmark system of size m stacks first-order subsystems 1/(s + a_k)
with a_k linearly spaced in [0.1, 0.3] on the diagonal (B = C = I, D = 0).
The multiplier is the interior disk with center c = 1/(2 min a_k) and radius
1.05 c: it covers each subsystem's response circle (center 1/(2 a_k), radius
1/(2 a_k)) and satisfies the positive-negative requirement r > |c|, so both
the free-P and the P >= 0 problems are feasible by construction.

Each repetition times the backend solve only (problem data is assembled once
per size and cached); rows carry wall-clock milliseconds for the soft and
hard variants and their ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .lmi import assemble_lmi, solve_feasibility
from .lti import StateSpace
from .regions import MultiplierPi, pi_interior

__all__ = ["BenchRow", "build_bench_system", "bench_multiplier", "run_bench",
           "PAPER_SIZES"]

PAPER_SIZES = (10, 25, 50, 75, 100, 125, 150, 200, 250, 300)


def build_bench_system(m: int) -> StateSpace:
    """Block-diagonal family diag(1/(s + a_k)), a_k linspace in [0.1, 0.3]."""
    if m < 1:
        raise ValueError("size must be >= 1")
    a = np.linspace(0.1, 0.3, m)
    return StateSpace(np.diag(-a), np.eye(m), np.eye(m), np.zeros((m, m)))


def bench_multiplier(m: int) -> MultiplierPi:
    a_min = 0.1
    c = 1.0 / (2.0 * a_min)
    return pi_interior(c, 1.05 * c)


@dataclass
class BenchRow:
    m: int
    rep: int
    t_soft_ms: float
    t_hard_ms: float
    speedup: float
    status_soft: str
    status_hard: str

    @property
    def ok(self) -> bool:
        return self.status_soft == "feasible" and self.status_hard == "feasible"


def run_bench(sizes: Sequence[int], reps: int = 5,
              backend: Optional[str] = None, eps: float = 1e-5,
              warmup: bool = True, progress=None) -> list:
    """Run the soft/hard timing comparison; returns one BenchRow per (m, rep).

    Failed solves are flagged in the status columns and the run continues.
    The solver tolerance is relaxed to ``eps`` (feasibility-grade); each
    size's problem data is assembled once and reused across repetitions.
    """
    rows = []
    for m in sizes:
        sys = build_bench_system(m)
        pi = bench_multiplier(m)
        soft = assemble_lmi(sys, pi, hard=False)
        hard = assemble_lmi(sys, pi, hard=True)
        soft.scs_data()
        hard.scs_data()
        if warmup:
            solve_feasibility(soft, backend=backend, eps=eps)
        for rep in range(reps):
            rs = solve_feasibility(soft, backend=backend, eps=eps)
            rh = solve_feasibility(hard, backend=backend, eps=eps)
            ts = rs.diagnostics.get("wall_ms", float("nan"))
            th = rh.diagnostics.get("wall_ms", float("nan"))
            row = BenchRow(
                m=m, rep=rep, t_soft_ms=ts, t_hard_ms=th,
                speedup=th / ts if ts > 0 else float("nan"),
                status_soft=rs.diagnostics.get("status", "unknown"),
                status_hard=rh.diagnostics.get("status", "unknown"),
            )
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def write_bench_csv(rows: Sequence[BenchRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("m,rep,t_soft_ms,t_hard_ms,speedup,status_soft,status_hard\n")
        for r in rows:
            fh.write(f"{r.m},{r.rep},{r.t_soft_ms:.3f},{r.t_hard_ms:.3f},"
                     f"{r.speedup:.4f},{r.status_soft},{r.status_hard}\n")
