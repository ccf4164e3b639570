"""One solver branch: a local-search loop with an attached subproblem sampler.

Each branch owns an independent RNG stream and an incumbent; the heuristic
loop (simulated annealing by default, tabu search optionally) explores the
encoding-feasible neighborhood, while every ``qm_period`` steps a QUBO window
subproblem is sampled and its decoded solutions compete with the incumbent.
Subproblem results arrive through a mailbox and are consumed at step
boundaries, so a slow query never blocks the loop.
"""

from __future__ import annotations

import math

import numpy as np

from ..modeling import Evaluation, Model
from ..qubo.sampler import sa_sample
from ..state import State
from .compare import is_better
from .config import SolverConfig
from .moves import initial_state, propose_state, reverse_move
from .sampleset import Sample, make_sample
from .subproblem import qm_query


def metropolis_delta(cand: Evaluation, cur: Evaluation) -> float:
    """Uphill magnitude on the violation-then-objective scale."""
    dv = cand.total_violation - cur.total_violation
    if dv != 0.0:
        return dv
    return cand.objective - cur.objective


class Branch:
    """State of one branch; stepped by the portfolio front end."""

    def __init__(self, index: int, model: Model, config: SolverConfig, clock):
        self.index = index
        self.config = config
        self.clock = clock
        self.rng = np.random.default_rng([config.seed & 0xFFFFFFFFFFFFFFFF, index])
        self.steps = 0
        self.stagnation = 0
        self.samples: list[Sample] = []
        self.warnings: list[str] = []
        self.tabu: dict = {}
        self.pending = None  # (future-like, query) awaiting mailbox consumption
        self.qm_failed = False

        self.current = initial_state(model, self.rng)
        self.current_eval = model.evaluate_unchecked(self.current)
        self.incumbent = self.current.copy()
        self.incumbent_eval = self.current_eval
        self.samples.append(
            make_sample(self.incumbent, self.incumbent_eval, index, 0, "init", clock())
        )

        self.t0 = 1.0
        self.temp = 1.0
        self.alpha = 1.0

    # -- schedule calibration ---------------------------------------------------

    def calibrate(self, model: Model, budget_steps: int) -> None:
        """Initial temperature from neighbor probes; cooling from the budget.

        T0 is the mean uphill magnitude over 100 random neighbors, and alpha
        is set so the temperature decays to 1e-3 * T0 across the predicted
        step budget.
        """
        deltas = []
        for _ in range(100):
            cand, _ = propose_state(model, self.current, self.rng)
            ev = model.evaluate_unchecked(cand)
            d = abs(metropolis_delta(ev, self.current_eval))
            if d > 0:
                deltas.append(d)
        self.t0 = float(np.mean(deltas)) if deltas else 1.0
        self.temp = self.t0
        budget = max(1000, budget_steps)
        self.alpha = (1e-3) ** (1.0 / budget)

    # -- sampling hooks -----------------------------------------------------------

    def record_improvement(self, source: str) -> None:
        self.samples.append(
            make_sample(self.incumbent, self.incumbent_eval, self.index,
                        self.steps, source, self.clock())
        )

    def offer(self, state: State, ev: Evaluation, source: str) -> bool:
        """Replace the incumbent when strictly better; True when it improved."""
        if is_better(ev, self.incumbent_eval):
            self.incumbent = state.copy()
            self.incumbent_eval = ev
            self.stagnation = 0
            self.record_improvement(source)
            return True
        return False

    # -- the classical heuristic step ----------------------------------------------

    def cm_step(self, model: Model) -> None:
        if self.config.cm_kind == "tabu":
            self._tabu_step(model)
        else:
            self._sa_step(model)
        self.steps += 1
        self.stagnation += 1
        if self.stagnation >= self.config.restart_after:
            # re-center the walk on the incumbent; the cooling schedule keeps
            # its course (resetting it would keep the search hot forever)
            self.current = self.incumbent.copy()
            self.current_eval = self.incumbent_eval
            self.stagnation = 0

    def _sa_step(self, model: Model) -> None:
        cand, _ = propose_state(model, self.current, self.rng)
        ev = model.evaluate_unchecked(cand)
        accept = is_better(ev, self.current_eval)
        if not accept:
            delta = metropolis_delta(ev, self.current_eval)
            if delta <= 0.0:
                accept = True
            elif self.temp > 0.0:
                accept = self.rng.random() < math.exp(-delta / self.temp)
        if accept:
            self.current = cand
            self.current_eval = ev
            self.offer(cand, ev, "cm")
        self.temp *= self.alpha

    def _tabu_step(self, model: Model) -> None:
        best_state = None
        best_eval = None
        best_tag = None
        for _ in range(self.config.tabu_candidates):
            cand, tag = propose_state(model, self.current, self.rng)
            ev = model.evaluate_unchecked(cand)
            blocked = self.tabu.get(tag, -1) > self.steps
            if blocked and not is_better(ev, self.incumbent_eval):
                continue  # tabu unless it beats the incumbent (aspiration)
            if best_eval is None or is_better(ev, best_eval):
                best_state, best_eval, best_tag = cand, ev, tag
        if best_eval is None:
            return
        self.tabu[reverse_move(best_tag)] = self.steps + self.config.tabu_tenure
        if len(self.tabu) > 4 * self.config.tabu_tenure * self.config.tabu_candidates:
            self.tabu = {k: v for k, v in self.tabu.items() if v > self.steps}
        self.current = best_state
        self.current_eval = best_eval
        self.offer(best_state, best_eval, "cm")

    # -- subproblem queries (the mailbox contract) -----------------------------------

    def want_query(self) -> bool:
        return (
            self.config.qm_enabled
            and not self.qm_failed
            and self.pending is None
            and self.steps > 0
            and self.steps % self.config.qm_period == 0
        )

    def launch_query(self, model: Model, executor) -> None:
        window = self.config.qm_window
        n_max = max(spec.n for spec in model.decisions)
        if window > n_max:
            msg = f"branch {self.index}: window {window} clamped to {n_max}"
            if msg not in self.warnings:
                self.warnings.append(msg)
        query = qm_query(model, self.incumbent, window, self.rng)
        if query is None:
            self.qm_failed = True
            self.warnings.append(
                f"branch {self.index}: model has no problem-family tag; "
                "subproblem sampling disabled"
            )
            return
        seed = int(self.rng.integers(0, 2**63 - 1))
        reads, sweeps = self.config.qm_reads, self.config.qm_sweeps

        def run():
            return sa_sample(query.qubo, reads=reads, sweeps=sweeps, seed=seed)

        if executor is None:
            self.pending = (_Immediate(run()), query)
        else:
            self.pending = (executor.submit(run), query)

    def consume_mailbox(self, model: Model) -> None:
        if self.pending is None:
            return
        future, query = self.pending
        if not future.done():
            return
        self.pending = None
        try:
            results = future.result()
        except Exception as exc:  # sampler failure must not kill the branch
            self.warnings.append(f"branch {self.index}: subproblem sampling failed: {exc}")
            return
        for bits, _ in results:
            state = query.decode(bits)
            if state is None:
                continue
            ev = model.evaluate_unchecked(state)
            if not ev.feasible:
                continue
            if self.offer(state, ev, "qm"):
                self.current = state.copy()
                self.current_eval = ev

    def finalize(self) -> None:
        self.samples.append(
            make_sample(self.incumbent, self.incumbent_eval, self.index,
                        self.steps, "final", self.clock())
        )


class _Immediate:
    """Future-like wrapper for inline (deterministic) query execution."""

    __slots__ = ("_value",)

    def __init__(self, value):
        self._value = value

    def done(self) -> bool:
        return True

    def result(self):
        return self._value
