"""Group trajectory prediction: grouping, destination retrieval, force-based rollout and evaluation."""

from ._core import (
    Config,
    DataError,
    Error,
    ForceParams,
    GroupState,
    MetricReport,
    ParseError,
    Trajectory,
    TrajectoryDatabase,
    ValidationError,
    WindowReport,
    ade,
    build_database,
    candidate_destinations,
    detect_groups,
    evaluate,
    fde,
    history_database,
    ingest,
    known_window,
    predict,
    read_canonical_csv,
    write_canonical_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
