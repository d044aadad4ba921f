"""Core modules for the quantum Borcherds-Bozec algebra workbench."""

from .types import (  # noqa: F401
    CartanDatum,
    Character,
    Component,
    ConditionCheck,
    DecompositionReport,
    ImaginaryCorrection,
    ModuleReport,
    RootLatticeVector,
    RootMultiplicityTable,
    RunConfig,
    StringClassification,
    StringComponent,
    Weight,
    WeylElement,
)
