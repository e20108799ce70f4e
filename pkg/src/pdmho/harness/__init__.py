"""Verification suites, limit studies, dataset emitters and the command line."""
from .config import DEFAULT_TOLERANCES, StudyConfig, load_config
from .studies import (
    FigureDataset,
    figure1_dataset,
    figure2_dataset,
    limit_study,
    orthonormality_suite,
    transformation_identity_check,
)
from .suites import SUITE_NAMES, verify_all

__all__ = [
    "DEFAULT_TOLERANCES",
    "StudyConfig",
    "load_config",
    "FigureDataset",
    "figure1_dataset",
    "figure2_dataset",
    "limit_study",
    "orthonormality_suite",
    "transformation_identity_check",
    "SUITE_NAMES",
    "verify_all",
]
