from .metrics import SamplesetMetrics, approximation_ratio, is_clamped, sampleset_metrics
from .report import emit_report, format_sig
from .runner import (
    Plan,
    PlanAlgorithm,
    PlanInstance,
    ResultsTable,
    cell_seed,
    load_optima,
    run_cell,
    run_experiment,
)
from .stattests import (
    HolmEntry,
    RankSummary,
    WilcoxonResult,
    average_ranks,
    friedman_critical_value,
    friedman_significant,
    friedman_statistic,
    holm_posthoc,
    normal_cdf,
    wilcoxon_rank_sum,
)

__all__ = [
    "HolmEntry",
    "Plan",
    "PlanAlgorithm",
    "PlanInstance",
    "RankSummary",
    "ResultsTable",
    "SamplesetMetrics",
    "WilcoxonResult",
    "approximation_ratio",
    "average_ranks",
    "cell_seed",
    "emit_report",
    "format_sig",
    "friedman_critical_value",
    "friedman_significant",
    "friedman_statistic",
    "holm_posthoc",
    "is_clamped",
    "load_optima",
    "normal_cdf",
    "run_cell",
    "run_experiment",
    "sampleset_metrics",
    "wilcoxon_rank_sum",
]
