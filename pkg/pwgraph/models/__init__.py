from .graph import Graph, VertexSet, GammaGraph
from .spectral import Signal, SpectralDecomposition, PWSpace
from .certificates import (
    BoundEntry,
    LambdaCertificate,
    GammaBound,
    PowerInequalityReport,
    EigenCountReport,
    LowerBoundReport,
    NyquistReport,
)
from .sampling import (
    SamplingFrame,
    ReconstructionReport,
    UniquenessReport,
    PartitionReport,
    RestrictionReport,
    LinePartition,
    SampleConsistency,
)
from .closed_forms import SymbolSpec, BernsteinReport, RectThresholdReport, TreeSpectrumReport
from .validators import ModelValidator, ModelSerializer
from .factories import GraphFactory

__all__ = [
    "Graph",
    "VertexSet",
    "GammaGraph",
    "Signal",
    "SpectralDecomposition",
    "PWSpace",
    "BoundEntry",
    "LambdaCertificate",
    "GammaBound",
    "PowerInequalityReport",
    "EigenCountReport",
    "LowerBoundReport",
    "NyquistReport",
    "SamplingFrame",
    "ReconstructionReport",
    "UniquenessReport",
    "PartitionReport",
    "RestrictionReport",
    "LinePartition",
    "SampleConsistency",
    "SymbolSpec",
    "BernsteinReport",
    "RectThresholdReport",
    "TreeSpectrumReport",
    "ModelValidator",
    "ModelSerializer",
    "GraphFactory",
]
