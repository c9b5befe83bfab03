"""Inner kernels: nonlinear forms, their element Jacobians, and the FD residual.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the NumPy implementation in ``_pykernels`` is loaded. Setting
``HUNTER_SAXTON_PURE_PYTHON=1`` forces the fallback.
"""

import os

from hunter_saxton.kernels import _pykernels as python_backend

compiled_backend = None
if os.environ.get("HUNTER_SAXTON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from hunter_saxton.kernels import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "cython" if compiled_backend is not None else "python"

g1_nodal = backend.g1_nodal
g1_element_jacobians = backend.g1_element_jacobians
g2_nodal = backend.g2_nodal
g2_element_jacobians = backend.g2_element_jacobians
fd_residual = backend.fd_residual
fd_jacobian_banded = backend.fd_jacobian_banded

__all__ = [
    "BACKEND_NAME",
    "backend",
    "compiled_backend",
    "python_backend",
    "g1_nodal",
    "g1_element_jacobians",
    "g2_nodal",
    "g2_element_jacobians",
    "fd_residual",
    "fd_jacobian_banded",
]
