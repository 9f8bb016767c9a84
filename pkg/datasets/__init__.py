"""
Datasets module for ridge scenarios, the SEIR study and CSV ingestion.
"""

from .dataset import Dataset
from .scenarios import (
    SCENARIOS,
    RidgeFunction,
    ScenarioTruth,
    SyntheticScenario,
    get_scenario,
    sample_scenario,
    true_egop,
)
from .seir import (
    REGIONS,
    SEIR_RANGES,
    SeirResponse,
    sample_seir,
    seir_monte_carlo_egop,
    seir_r0,
    seir_r0_gradient,
    seir_true_egop,
)
from .csv_loader import load_csv, load_inputs, save_csv

__all__ = [
    'Dataset', 'SCENARIOS', 'RidgeFunction', 'ScenarioTruth', 'SyntheticScenario',
    'get_scenario', 'sample_scenario', 'true_egop', 'REGIONS', 'SEIR_RANGES',
    'SeirResponse', 'sample_seir', 'seir_monte_carlo_egop', 'seir_r0',
    'seir_r0_gradient', 'seir_true_egop', 'load_csv', 'load_inputs', 'save_csv',
]
