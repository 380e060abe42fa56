"""Directed information-flow networks from financial time series: log-return
panels, symbol binning, Transfer Entropy and its surrogate-corrected variants,
asset graphs, centralities, stress embeddings, and group flow rankings."""

from .discretize import BinningSpec, JointCounts, SymbolSeries, fit_bins, joint_counts, symbolize
from .embed import Embedding, classical_mds, refine, stress
from .errors import EtenetError
from .estimators import ReturnBinner, StressEmbedding, TransferEntropyNetwork, panel_from_array
from .flows import FlowReport, GroupSpec, build_group_panel, emission_ranking, flow_report, reception_ranking
from .infotheory import (
    conditional_entropy,
    self_conditional_entropy,
    shannon_entropy,
    te_matrix,
    transfer_entropy,
)
from .matrices import LabeledMatrix
from .netmetrics import (
    AssetGraph,
    CentralityReport,
    asset_graph,
    binarize,
    centralities,
    correlation_distance,
    nte_distance,
    pearson_matrix,
)
from .panel import (
    PriceSeries,
    ReturnPanel,
    TradingCalendar,
    align_to_calendar,
    augment_lagged,
    build_panel,
    log_returns,
)
from .surrogate import (
    SurrogatePlan,
    correlation_noise_floor,
    ete_matrix,
    nte_matrix,
    rte_matrix,
    shuffle_series,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
