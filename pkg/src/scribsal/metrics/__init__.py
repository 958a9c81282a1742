from .measures import (BETA_SQ, NUM_THRESHOLDS, e_measure, e_measure_curve, f_beta,
                       f_stats, mae, prf_curve, s_measure, thresholds, validate_pair)
from .report import (ImageMetrics, MetricReport, evaluate_dataset, evaluate_pairs,
                     export_curves, load_groundtruth, load_prediction, read_curve_csv,
                     read_report, write_report)

__all__ = [
    "BETA_SQ", "NUM_THRESHOLDS", "thresholds", "validate_pair", "mae", "prf_curve",
    "f_beta", "f_stats", "e_measure", "e_measure_curve", "s_measure",
    "ImageMetrics", "MetricReport", "evaluate_dataset", "evaluate_pairs",
    "export_curves", "write_report", "read_report", "read_curve_csv",
    "load_prediction", "load_groundtruth",
]
