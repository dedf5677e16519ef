"""The Bolza surface as a quotient of the Poincare disc: closed geodesics,
intersection numbers with the systolic system and curve arrangements."""

from .model import BolzaModel, ConstructionError, bolza
from .spectrum import CurveClass, enumerate_classes, length_spectrum
from .systems import omega1, omega2, second_systoles, systolic_set

__version__ = "0.1.0"

__all__ = [
    "BolzaModel",
    "ConstructionError",
    "CurveClass",
    "bolza",
    "enumerate_classes",
    "length_spectrum",
    "omega1",
    "omega2",
    "second_systoles",
    "systolic_set",
]
