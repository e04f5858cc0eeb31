"""Enumeration algorithms with NP and Sigma2 oracles, with instrumented delay."""

from .engine import (
    DelayProfile,
    EReduction,
    Profiler,
    SolutionStream,
    blocking_enumerate,
    delay_profile,
    ereduce_compose,
    ereduce_execute,
    flasher,
)
from .model import (
    AbductionInstance,
    BoolRelation,
    CnfFormula,
    DatabaseInstance,
    DiagnosisInstance,
    Egd,
    GammaFormula,
    Graph,
    Hypergraph,
    QbfInstance,
)
from .oracles.sat import SatOracle
from .oracles.sigma2 import Sigma2Oracle

__version__ = "0.1.0"

__all__ = [
    "AbductionInstance",
    "BoolRelation",
    "CnfFormula",
    "DatabaseInstance",
    "DelayProfile",
    "DiagnosisInstance",
    "EReduction",
    "Egd",
    "GammaFormula",
    "Graph",
    "Hypergraph",
    "Profiler",
    "QbfInstance",
    "SatOracle",
    "Sigma2Oracle",
    "SolutionStream",
    "blocking_enumerate",
    "delay_profile",
    "ereduce_compose",
    "ereduce_execute",
    "flasher",
]
