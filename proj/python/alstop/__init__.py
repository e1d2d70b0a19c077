"""Python bindings for the active-learning stopping-criteria benchmark."""

from alstop._core import (  # noqa: F401
    ConfigError,
    CorpusError,
    SparseVector,
    StoppingError,
    SvmError,
    SvmModel,
    Vocabulary,
    accuracy,
    balanced_accuracy,
    confusion,
    decision_value,
    dual_objective,
    f_beta,
    hyperplane_distance,
    kappa,
    predict,
    run_experiment,
    synth_corpus_jsonl,
    tokenize,
    train_svm,
    vectorize,
)

__all__ = [
    "ConfigError",
    "CorpusError",
    "SparseVector",
    "StoppingError",
    "SvmError",
    "SvmModel",
    "Vocabulary",
    "accuracy",
    "balanced_accuracy",
    "confusion",
    "decision_value",
    "dual_objective",
    "f_beta",
    "hyperplane_distance",
    "kappa",
    "predict",
    "run_experiment",
    "synth_corpus_jsonl",
    "tokenize",
    "train_svm",
    "vectorize",
]
