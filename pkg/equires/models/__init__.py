# equires/models/__init__.py

from equires.models.basic_object import BasicObject, IdTriple, pre_equivalence_probe
from equires.models.chart import CenterSpec, Chart, ChartCenter, CoordinateChange, Hypersurface, SPair, blowup

__all__ = [
    "BasicObject",
    "CenterSpec",
    "Chart",
    "ChartCenter",
    "CoordinateChange",
    "Hypersurface",
    "IdTriple",
    "SPair",
    "blowup",
    "pre_equivalence_probe",
]
