"""finevo: exact limit structure and seeded simulation of random
compositions of transformations of a finite set."""

__version__ = "0.1.0"

from .analysis import Analysis, analyze_law, example_law
from .measure import MappingLaw, RationalMeasure
from .transform import Transformation

__all__ = [
    "Analysis",
    "MappingLaw",
    "RationalMeasure",
    "Transformation",
    "analyze_law",
    "example_law",
    "__version__",
]
