"""Direct solver for cyclic (periodic) block penta-diagonal linear systems."""

__version__ = "0.1.0"

from ._compat import BACKEND
from .blocks import circulant, inf_norm_vec, mat_invert, mat_mul
from .exceptions import (
    FormatError,
    SingularAuxiliaryError,
    SingularBlockError,
    SingularSystemError,
)
from .matrix import (
    BlockPentaCyclic,
    matvec,
    read_solution,
    read_system,
    residual_inf,
    to_dense,
    write_solution,
    write_system,
)
from .oracle import dense_solve
from .solver import (
    Factorization,
    SolveReport,
    SolverParams,
    factorize,
    solve,
    solve_in_place,
    solve_multi,
    solve_system,
)
