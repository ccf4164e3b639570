"""Portfolio front end: equally structured branches with merged results.

``solve`` spawns ``n_branches`` identical branch workflows that differ only
in their RNG streams, interleaves them round-robin until the wall-clock limit
(or the optional deterministic step budget) is exhausted, then merges every
branch's deposited samples into one best-first :class:`SampleSet`.

Subproblem sampling runs on a small thread pool by default (the annealing
kernel releases the GIL), with mailbox delivery consumed at step boundaries;
``qm_inline=True`` executes queries synchronously for reproducible runs.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

from ..errors import StateError
from ..modeling import Model
from .branch import Branch
from .config import SolverConfig
from .sampleset import SampleSet

_CHUNK = 32


def solve(model: Model, config: SolverConfig | None = None) -> SampleSet:
    """Run the portfolio on a model with exactly one objective."""
    config = config or SolverConfig()
    model.freeze()
    if model.objective is None:
        raise StateError("solve requires a model with an objective")

    n_elements = sum(spec.n for spec in model.decisions)
    time_limit = config.resolved_time_limit(n_elements)
    n_branches = config.resolved_branches()

    t_start = time.monotonic()
    deadline = t_start + time_limit

    def clock() -> float:
        return time.monotonic() - t_start

    branches = [Branch(b, model, config, clock) for b in range(n_branches)]

    # per-branch step budget: explicit, or estimated from the eval rate so the
    # cooling schedule lands near its floor at the deadline
    if config.max_steps is not None:
        budget = config.max_steps
        uncalibrated = branches
    else:
        probe_t = time.monotonic()
        branches[0].calibrate(model, 1000)
        probe_dt = max(1e-6, time.monotonic() - probe_t)
        rate = 100.0 / probe_dt
        budget = int(min(5e7, max(1000, rate * time_limit / n_branches)))
        branches[0].alpha = (1e-3) ** (1.0 / budget)
        branches[0].temp = branches[0].t0
        uncalibrated = branches[1:]
    for br in uncalibrated:
        br.calibrate(model, budget)

    executor = None
    if config.qm_enabled and not config.qm_inline:
        workers = min(n_branches, 4, config.threads or 4)
        executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="qm")

    hit_target = False
    try:
        while not hit_target:
            alive = False
            for br in branches:
                if config.max_steps is not None and br.steps >= config.max_steps:
                    continue
                alive = True
                for _ in range(_CHUNK):
                    if config.max_steps is not None and br.steps >= config.max_steps:
                        break
                    if time.monotonic() >= deadline:
                        alive = False
                        break
                    br.consume_mailbox(model)
                    if br.want_query():
                        br.launch_query(model, executor)
                    br.cm_step(model)
                    if (
                        config.target is not None
                        and br.incumbent_eval.feasible
                        and br.incumbent_eval.objective <= config.target + 1e-9
                    ):
                        hit_target = True
                        break
                if hit_target or time.monotonic() >= deadline:
                    break
            if time.monotonic() >= deadline or not alive:
                break
        for br in branches:
            br.consume_mailbox(model)
            br.finalize()
    finally:
        if executor is not None:
            executor.shutdown(wait=False, cancel_futures=True)

    samples = [s for br in branches for s in br.samples]
    warnings = [w for br in branches for w in br.warnings]
    return SampleSet(
        samples=samples,
        config=config.echo(),
        wall_time=clock(),
        warnings=warnings,
    )
