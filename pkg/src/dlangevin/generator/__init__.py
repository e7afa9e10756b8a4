"""
Results generator package.
"""

from .results_generator import RESULTS_FILE, SUMMARY_FILE, GeneratorException, ResultsGenerator

__all__ = [
    'ResultsGenerator',
    'GeneratorException',
    'RESULTS_FILE',
    'SUMMARY_FILE',
]
