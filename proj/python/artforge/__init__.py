"""Python bindings for the artforge toolkit."""

from ._artforge import (
    DatasetStats,
    TrainConfig,
    UndefinedMetricError,
    __version__,
    assign_styles,
    channel_stats,
    dataset_stats,
    early_stop_at,
    emit_train_config,
    evaluate,
    filter_person_positive,
    iou,
    lr_at,
    ntrain_sizes,
    parse_train_config,
    run_cli,
    stylize,
    subset_sample,
)

__all__ = [
    "DatasetStats",
    "TrainConfig",
    "UndefinedMetricError",
    "__version__",
    "assign_styles",
    "channel_stats",
    "dataset_stats",
    "early_stop_at",
    "emit_train_config",
    "evaluate",
    "filter_person_positive",
    "iou",
    "lr_at",
    "ntrain_sizes",
    "parse_train_config",
    "run_cli",
    "stylize",
    "subset_sample",
]
