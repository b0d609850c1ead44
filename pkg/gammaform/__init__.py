# gammaform/__init__.py

from .errors import GammaformError
from .grid import Grid, GridField
from .layouts import all_physics, layout_of
from .materials import LawField, MaterialLaw, build_material_law, law_field
from .models import FieldLayout, PhysicsId, SpectralPoint
from .solver import SolveConfig, SolveReport, direct_solve, effective_operator, fixed_point_solve, project_grid_field
from .symbols import canonical_projector, potential_symbol
from .verification import SymbolReport, verify_symbol

__all__ = [
    'GammaformError', 'Grid', 'GridField', 'all_physics', 'layout_of',
    'LawField', 'MaterialLaw', 'build_material_law', 'law_field',
    'FieldLayout', 'PhysicsId', 'SpectralPoint',
    'SolveConfig', 'SolveReport', 'direct_solve', 'effective_operator', 'fixed_point_solve', 'project_grid_field',
    'canonical_projector', 'potential_symbol', 'SymbolReport', 'verify_symbol',
]
