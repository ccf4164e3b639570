"""Experiment runner: instances x algorithms x repeated runs.

A plan is a single JSON document naming instance files, algorithms (the
portfolio solver and/or the binary annealing baseline), the run count, time
limits, and a reference-optima file.  Cells run with a seed derived from
(master seed, instance, algorithm, run), results append to a JSONL log, and
a re-run skips completed cells, so interrupted experiments resume for free.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import MetricError, ParseError
from ..problems import BUILDERS, parse_kplib, parse_maxcut, parse_tsplib
from ..qubo import kp_to_qubo, mcp_to_qubo, sa_sample, tsp_to_qubo
from ..solver import SolverConfig, solve
from .metrics import sampleset_metrics

RECORD_FIELDS = [
    "instance",
    "algorithm",
    "run",
    "best_value",
    "best_ratio",
    "mean_ratio",
    "feasible_fraction",
    "n_samples",
    "wall_time",
]

PARSERS = {"tsp": parse_tsplib, "kp": parse_kplib, "mc": parse_maxcut}
ENCODERS = {"tsp": tsp_to_qubo, "kp": kp_to_qubo, "mc": mcp_to_qubo}


@dataclass(frozen=True)
class PlanInstance:
    id: str
    problem: str  # "tsp", "kp", or "mc"
    path: str


@dataclass(frozen=True)
class PlanAlgorithm:
    name: str
    kind: str  # "nl" (portfolio) or "qubo-sa" (binary baseline)
    config: dict = field(default_factory=dict)


@dataclass
class Plan:
    instances: list[PlanInstance]
    algorithms: list[PlanAlgorithm]
    runs: int
    master_seed: int
    time_limit: float
    optima_path: str | None = None
    base_dir: Path = Path(".")

    @classmethod
    def from_json(cls, text: str, base_dir: Path = Path(".")) -> "Plan":
        doc = json.loads(text)
        problems = {"maxcut": "mc"}  # accepted alias
        instances = [
            PlanInstance(d["id"], problems.get(d["problem"], d["problem"]), d["path"])
            for d in doc["instances"]
        ]
        for inst in instances:
            if inst.problem not in PARSERS:
                raise ParseError(f"unknown problem {inst.problem!r} in plan")
        algorithms = [
            PlanAlgorithm(d["name"], d.get("kind", d["name"]), d.get("config", {}))
            for d in doc["algorithms"]
        ]
        for alg in algorithms:
            if alg.kind not in ("nl", "qubo-sa"):
                raise ParseError(f"unknown algorithm kind {alg.kind!r} in plan")
        return cls(
            instances=instances,
            algorithms=algorithms,
            runs=int(doc.get("runs", 10)),
            master_seed=int(doc.get("master_seed", 0)),
            time_limit=float(doc.get("time_limit", 5.0)),
            optima_path=doc.get("optima"),
            base_dir=base_dir,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Plan":
        p = Path(path)
        return cls.from_json(p.read_text(), base_dir=p.parent)


def cell_seed(master_seed: int, instance: str, algorithm: str, run: int) -> int:
    """Stable 63-bit seed for one experiment cell."""
    text = f"{master_seed}|{instance}|{algorithm}|{run}"
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") & 0x7FFFFFFFFFFFFFFF


def load_optima(path: str | Path) -> dict[str, float]:
    """Reference-optima file: lines of ``instance_id optimum``."""
    out: dict[str, float] = {}
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad optima line: {ln!r}")
        out[parts[0]] = float(parts[1])
    return out


@dataclass
class ResultsTable:
    """Flat records plus the reference optima used for ratio metrics."""

    records: list[dict] = field(default_factory=list)
    optima: dict[str, float] = field(default_factory=dict)

    def add(self, record: dict) -> None:
        self.records.append(record)

    def completed(self) -> set[tuple[str, str, int]]:
        return {(r["instance"], r["algorithm"], r["run"]) for r in self.records}

    def runs_of(self, instance: str, algorithm: str) -> list[dict]:
        return [
            r
            for r in self.records
            if r["instance"] == instance and r["algorithm"] == algorithm
        ]

    def score_matrix(self, instances: list[str], algorithms: list[str],
                     metric: str = "best_ratio") -> np.ndarray:
        """Mean metric over runs, instances x algorithms."""
        out = np.empty((len(instances), len(algorithms)))
        for i, inst in enumerate(instances):
            for j, alg in enumerate(algorithms):
                rows = self.runs_of(inst, alg)
                if not rows:
                    raise MetricError(f"no records for ({inst}, {alg})")
                out[i, j] = float(np.mean([r[metric] for r in rows]))
        return out

    def save_jsonl(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for r in self.records:
                fh.write(json.dumps(r, sort_keys=True) + "\n")

    @classmethod
    def load_jsonl(cls, path: str | Path, optima: dict | None = None) -> "ResultsTable":
        table = cls(optima=optima or {})
        for ln in Path(path).read_text().splitlines():
            if ln.strip():
                table.add(json.loads(ln))
        return table


def _native(sense: str, objective: float) -> float:
    return -objective if sense == "max" else objective


def run_cell(model, family: str, algorithm: PlanAlgorithm, seed: int,
             time_limit: float, optimum: float | None,
             threads: int | None = None) -> dict:
    """One (instance, algorithm, run) execution, reduced to metric values."""
    sense = model.tags["sense"]
    t0 = time.monotonic()
    if algorithm.kind == "nl":
        kwargs = dict(algorithm.config)
        if threads is not None:
            kwargs.setdefault("threads", threads)
        cfg = SolverConfig(time_limit=time_limit, seed=seed, **kwargs)
        result = solve(model, cfg)
        pairs = [(_native(sense, s.objective), s.feasible) for s in result]
    else:
        instance = model.tags["instance"]
        qubo, decode = ENCODERS[family](instance)
        reads = int(algorithm.config.get("reads", 32))
        sweeps = int(algorithm.config.get("sweeps", 512))
        # honor the wall budget: sample in small read batches until either the
        # requested reads or the time limit is exhausted (at least one batch)
        batch = max(1, reads // 8)
        pairs = []
        done = 0
        while done < reads:
            take = min(batch, reads - done)
            for bits, _ in sa_sample(qubo, reads=take, sweeps=sweeps, seed=seed + done):
                state = decode(bits)
                if state is None:
                    pairs.append((0.0, False))
                    continue
                ev = model.evaluate(state)
                pairs.append((_native(sense, ev.objective), ev.feasible))
            done += take
            if time.monotonic() - t0 >= time_limit:
                break
    wall = time.monotonic() - t0

    feasible_values = [v for v, ok in pairs if ok]
    if sense == "max":
        best_value = max(feasible_values) if feasible_values else None
    else:
        best_value = min(feasible_values) if feasible_values else None
    metrics = sampleset_metrics(pairs, optimum, sense) if optimum is not None else None
    return {
        "best_value": best_value,
        "best_ratio": metrics.best_ratio if metrics else None,
        "mean_ratio": metrics.mean_ratio if metrics else None,
        "feasible_fraction": (
            metrics.feasible_fraction
            if metrics
            else sum(ok for _, ok in pairs) / len(pairs)
        ),
        "n_samples": len(pairs),
        "wall_time": round(wall, 4),
    }


def run_experiment(plan: Plan, out_dir: str | Path, resume: bool = True,
                   ratios_required: bool = True, threads: int | None = None,
                   log=None) -> ResultsTable:
    """Execute every cell of the plan, appending to ``records.jsonl``.

    With ``resume=True`` cells already present in the log are skipped, so
    re-running a completed plan is a no-op.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records_path = out / "records.jsonl"

    optima: dict[str, float] = {}
    if plan.optima_path:
        optima = load_optima((plan.base_dir / plan.optima_path))
    if ratios_required:
        missing = [i.id for i in plan.instances if i.id not in optima]
        if missing:
            raise MetricError(
                "reference optima missing for instances: " + ", ".join(missing)
            )

    table = ResultsTable(optima=optima)
    if resume and records_path.exists():
        table = ResultsTable.load_jsonl(records_path, optima=optima)
    done = table.completed() if resume else set()

    models = {}
    for inst in plan.instances:
        text = (plan.base_dir / inst.path).read_text()
        parsed = PARSERS[inst.problem](text, Path(inst.path).stem)
        models[inst.id] = (inst.problem, BUILDERS[inst.problem](parsed))

    with open(records_path, "a") as fh:
        for inst in plan.instances:
            family, model = models[inst.id]
            for alg in plan.algorithms:
                for run in range(plan.runs):
                    key = (inst.id, alg.name, run)
                    if key in done:
                        continue
                    seed = cell_seed(plan.master_seed, inst.id, alg.name, run)
                    cell = run_cell(
                        model, family, alg, seed, plan.time_limit,
                        optima.get(inst.id), threads=threads,
                    )
                    record = {"instance": inst.id, "algorithm": alg.name, "run": run}
                    record.update(cell)
                    table.add(record)
                    fh.write(json.dumps(record, sort_keys=True) + "\n")
                    fh.flush()
                    if log:
                        log(
                            f"{inst.id} x {alg.name} run {run}: "
                            f"best={record['best_value']} ratio={record['best_ratio']}"
                        )
    return table
