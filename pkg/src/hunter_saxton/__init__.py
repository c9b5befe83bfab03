"""Energy-preserving solvers for the Hunter-Saxton equation on [-L, L]."""

from hunter_saxton.errors import DomainError, MeshFormatError, NewtonError, ParameterError, StepError
from hunter_saxton.mesh import Mesh, graded_mesh, load_mesh, uniform_mesh, write_mesh
from hunter_saxton.kernels import BACKEND_NAME

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "DomainError",
    "Mesh",
    "MeshFormatError",
    "NewtonError",
    "ParameterError",
    "StepError",
    "graded_mesh",
    "load_mesh",
    "uniform_mesh",
    "write_mesh",
]
