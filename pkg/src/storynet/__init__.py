"""Co-occurrence network statistics for telling fiction from news.

The pipeline: tokenize a text sample, build the word co-occurrence
network at word distance m, fit power laws to its degree and clustering
distributions, and feed the three exponents to a two-group linear
discriminant.
"""

from .classify import (
    BootstrapReport,
    DiscriminantModel,
    bootstrap_accuracy,
    classify,
    evaluate,
    load_model,
    pooled_covariance,
    project,
    save_model,
    train_discriminant,
    zipf_exponent,
)
from .corpus import (
    CorpusManifest,
    ManifestEntry,
    SampleWindow,
    extract_window,
    load_manifest,
    split_control_eval,
)
from .fitting import (
    BinnedSeries,
    FeatureOptions,
    FeatureVector,
    PowerLawFit,
    bin_running_average,
    extract_features,
    fit_power_law,
)
from .measures import (
    clustering_by_degree,
    clustering_coefficients,
    degree_distribution,
    degrees,
    mean_geodesic,
    small_world_check,
)
from .semnet import SemanticNetwork, build_network, edge_count
from .tokenizer import Token, TokenStream, lemmatize, make_stream, tokenize

__version__ = "0.1.0"

__all__ = [
    "BootstrapReport",
    "DiscriminantModel",
    "bootstrap_accuracy",
    "classify",
    "evaluate",
    "load_model",
    "pooled_covariance",
    "project",
    "save_model",
    "train_discriminant",
    "zipf_exponent",
    "CorpusManifest",
    "ManifestEntry",
    "SampleWindow",
    "extract_window",
    "load_manifest",
    "split_control_eval",
    "BinnedSeries",
    "FeatureOptions",
    "FeatureVector",
    "PowerLawFit",
    "bin_running_average",
    "extract_features",
    "fit_power_law",
    "clustering_by_degree",
    "clustering_coefficients",
    "degree_distribution",
    "degrees",
    "mean_geodesic",
    "small_world_check",
    "SemanticNetwork",
    "build_network",
    "edge_count",
    "Token",
    "TokenStream",
    "lemmatize",
    "make_stream",
    "tokenize",
    "__version__",
]
