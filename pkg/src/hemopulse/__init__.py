"""Hemorrhage screening from tissue-pulsatility waveforms.

From-scratch pipeline: synthetic cohort generation, z-score
standardization, Jacobi-based PCA, six classifier families, and a
leakage-free benchmark harness with deterministic reports.
"""

from .classifiers import (
    ClassifierSpec,
    TrainedModel,
    decision_scores,
    deserialize_model,
    predict,
    serialize_model,
    train,
)
from .cohort import Cohort, load_cohort, save_cohort
from .errors import (
    ConfigError,
    DataError,
    FeatureSpaceMismatchError,
    HemopulseError,
    ModelFormatError,
    NumericError,
)
from .evaluation import (
    EvaluationReport,
    FoldPlan,
    SplitPlan,
    grid_search,
    run_benchmark,
    stratified_kfold,
    stratified_split,
)
from .metrics import (
    ConfusionCounts,
    MetricsRecord,
    compute_confusion,
    compute_macro_metrics,
    compute_metrics,
)
from .preprocess import (
    FeatureSpaceModel,
    FittedScaler,
    PcaModel,
    build_feature_space,
    correlation_matrix,
    explained_variance,
    fit_pca,
    fit_scaler,
    project,
    transform,
)
from .rng import RngStream
from .synth import GeneratorConfig, generate_cohort

__version__ = "0.1.0"
