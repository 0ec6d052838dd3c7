"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built;
otherwise the pure-Python/numpy twin is used.  Both expose the same API
(see `_kernels_py` for the reference docstrings); `tests/test_kernels.py`
pins the two implementations against each other.
"""

from __future__ import annotations

try:
    from . import _kernels_cy as _impl
except ImportError:
    from . import _kernels_py as _impl

from . import _kernels_py as pure_backend

compiled_backend = _impl if _impl.BACKEND == "compiled" else None

BACKEND = _impl.BACKEND
MODEL_TRANSVERSE = _impl.MODEL_TRANSVERSE
MODEL_DISPERSIVE = _impl.MODEL_DISPERSIVE
ZETA_OPT = _impl.ZETA_OPT

lambert_w0 = _impl.lambert_w0
tau_opt_transverse = _impl.tau_opt_transverse
zeta = _impl.zeta
transverse_entries = _impl.transverse_entries
transverse_entries_dbeta = _impl.transverse_entries_dbeta
dispersive_kernel_values = _impl.dispersive_kernel_values
dispersive_entries = _impl.dispersive_entries
dispersive_entries_dbeta = _impl.dispersive_entries_dbeta
p0_population = _impl.p0_population
dp0_population = _impl.dp0_population
fisher_population = _impl.fisher_population
qfi_closed = _impl.qfi_closed
one_minus_bloch_norm_sq = _impl.one_minus_bloch_norm_sq
stable_eigenvalues = _impl.stable_eigenvalues
fisher_qfi_grid = _impl.fisher_qfi_grid


def available_backends():
    """Importable kernel backends, compiled first if present."""
    backends = []
    if compiled_backend is not None:
        backends.append(compiled_backend)
    backends.append(pure_backend)
    return backends
