"""Toolkit for news diffusion networks on social platforms.

Reconstructs directed interaction networks from event streams, measures
global topology (components, diameter, clustering, k-core), compares
networks with alignment-free distances (directed graphlet correlation
distance, portrait divergence), and classifies mainstream versus
disinformation spreading patterns with cross-validated linear and
nearest-neighbor models.
"""

from .errors import (
    DatasetError,
    DiffnetError,
    EmptyGraphError,
    FileFormatError,
    MalformedEventError,
)
from .graphs import (
    Bias,
    DiffusionNetwork,
    EdgeDirection,
    Interaction,
    InteractionEvent,
    Label,
    SizeBucket,
    bucket_of,
    build_network,
    group_events_by_url,
    load_network,
    parse_event,
    read_events,
    save_network,
)
from .features import (
    FEATURE_NAMES,
    ClusteringVariant,
    FeatureVector,
    average_clustering,
    core_numbers,
    extract_features,
    local_clustering,
    lwcc_diameter,
    main_kcore,
    strongly_connected_component_sizes,
    weakly_connected_components,
)
from .graphlets import (
    CATALOG,
    LARGE_NETWORK_THRESHOLD,
    N_ORBITS,
    LargeNetworkWarning,
    correlation_matrix,
    count_orbits,
    dgcd13,
    dgcd_from_correlations,
    load_signature,
    network_correlations,
    save_signature,
)
from .portraits import (
    divergence_from_portraits,
    load_portrait,
    pad_portraits,
    pair_distribution,
    portrait,
    portrait_divergence,
    save_portrait,
)
from .ml import (
    ClassificationReport,
    EvalConfig,
    FoldMetrics,
    KSResult,
    LabeledDataset,
    LogisticConfig,
    LogisticModel,
    POSITIVE_LABEL,
    RocCurve,
    Sample,
    evaluate,
    feature_ks_tests,
    knn_predict,
    knn_predict_from_distances,
    ks_two_sample,
    logistic_fit,
    logistic_loss_grad,
    logistic_predict,
    roc_auc,
    standardize_apply,
    standardize_fit,
    stratified_shuffle_split,
    threshold_metrics,
)
from .synth import (
    CascadeRecipe,
    ClassProfile,
    generate,
    generate_ensemble,
    mean_audience_size,
    recipe_for,
)
from .dataset import (
    ManifestEntry,
    assemble,
    dataset_from_samples,
    read_distance_matrix,
    read_feature_table,
    read_manifest,
    write_distance_matrix,
    write_feature_table,
    write_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "Bias",
    "CATALOG",
    "CascadeRecipe",
    "ClassProfile",
    "ClassificationReport",
    "ClusteringVariant",
    "DatasetError",
    "DiffnetError",
    "DiffusionNetwork",
    "EdgeDirection",
    "EmptyGraphError",
    "EvalConfig",
    "FEATURE_NAMES",
    "FeatureVector",
    "FileFormatError",
    "FoldMetrics",
    "Interaction",
    "InteractionEvent",
    "KSResult",
    "LARGE_NETWORK_THRESHOLD",
    "Label",
    "LabeledDataset",
    "LargeNetworkWarning",
    "LogisticConfig",
    "LogisticModel",
    "MalformedEventError",
    "ManifestEntry",
    "N_ORBITS",
    "POSITIVE_LABEL",
    "RocCurve",
    "Sample",
    "SizeBucket",
    "assemble",
    "average_clustering",
    "bucket_of",
    "build_network",
    "core_numbers",
    "correlation_matrix",
    "count_orbits",
    "dataset_from_samples",
    "dgcd13",
    "dgcd_from_correlations",
    "divergence_from_portraits",
    "evaluate",
    "extract_features",
    "feature_ks_tests",
    "generate",
    "generate_ensemble",
    "group_events_by_url",
    "knn_predict",
    "knn_predict_from_distances",
    "ks_two_sample",
    "load_network",
    "load_portrait",
    "load_signature",
    "local_clustering",
    "logistic_fit",
    "logistic_loss_grad",
    "logistic_predict",
    "lwcc_diameter",
    "main_kcore",
    "mean_audience_size",
    "network_correlations",
    "pad_portraits",
    "pair_distribution",
    "parse_event",
    "portrait",
    "portrait_divergence",
    "read_distance_matrix",
    "read_events",
    "read_feature_table",
    "read_manifest",
    "recipe_for",
    "roc_auc",
    "save_network",
    "save_portrait",
    "save_signature",
    "standardize_apply",
    "standardize_fit",
    "stratified_shuffle_split",
    "strongly_connected_component_sizes",
    "threshold_metrics",
    "weakly_connected_components",
    "write_distance_matrix",
    "write_feature_table",
    "write_manifest",
]
