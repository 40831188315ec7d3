"""Cyclic block penta-diagonal matrices.

Block row ``k`` (1-based) holds ``A_k, B_k, C_k, D_k, E_k`` at block columns
``k-2, k-1, k, k+1, k+2`` taken modulo ``n``, so ``A_1, B_1, A_2`` sit in the
top-right corner and ``E_{n-1}, D_n, E_n`` in the bottom-left one. Internally
the bands are stored as ``(n, m, m)`` arrays indexed from zero, and block
vectors as ``(n, m)`` arrays.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import FormatError

MIN_BLOCK_ROWS = 5
DENSE_GUARD = 4096

SYSTEM_MAGIC = "cbpenta"
SOLUTION_MAGIC = "cbpenta-solution"
FORMAT_VERSION = "1"

BANDS = ("A", "B", "C", "D", "E")


@dataclass(frozen=True, eq=False)
class BlockPentaCyclic:
    """The five block bands of a cyclic block penta-diagonal matrix.

    Each of `A` ... `E` is an array of shape ``(n, m, m)``. ``n >= 5`` is
    required: at ``n = 4`` the corner block ``A_1`` lands on the same block
    column as ``E_1``.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        shape = None
        for name in BANDS:
            band = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if band.ndim != 3 or band.shape[1] != band.shape[2] or band.shape[1] < 1:
                raise ValueError(f"band {name} must have shape (n, m, m), got {band.shape}")
            if shape is None:
                shape = band.shape
            elif band.shape != shape:
                raise ValueError(f"band {name} has shape {band.shape}, expected {shape}")
            if not np.all(np.isfinite(band)):
                raise ValueError(f"band {name} has non-finite entries")
            object.__setattr__(self, name, band)
        if shape[0] < MIN_BLOCK_ROWS:
            raise ValueError(f"n must be >= {MIN_BLOCK_ROWS}, got n={shape[0]}")

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.A.shape[1]

    @classmethod
    def constant(cls, n, A, B, C, D, E):
        """Matrix whose block rows all repeat the same five blocks."""
        blocks = [np.atleast_2d(np.asarray(b, dtype=np.float64)) for b in (A, B, C, D, E)]
        return cls(*(np.repeat(b[None], n, axis=0) for b in blocks))

    def copy(self):
        return BlockPentaCyclic(*(getattr(self, name).copy() for name in BANDS))

    def bands(self):
        return tuple(getattr(self, name) for name in BANDS)


def as_block_vector(x, m, n):
    """Validate a block vector against matrix dimensions; returns ``(n, m)``."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.shape == (n * m,):
        arr = arr.reshape(n, m)
    if arr.shape != (n, m):
        raise ValueError(f"block vector must have shape ({n}, {m}), got {arr.shape}")
    return arr


def matvec(mat, x):
    """Block product ``A x`` with cyclic wrapping of the block indices."""
    x = as_block_vector(x, mat.m, mat.n)
    out = np.einsum("kij,kj->ki", mat.C, x)
    for band, shift in ((mat.A, 2), (mat.B, 1), (mat.D, -1), (mat.E, -2)):
        # np.roll(x, s)[k] == x[k - s]
        out += np.einsum("kij,kj->ki", band, np.roll(x, shift, axis=0))
    return out


def to_dense(mat, max_size=DENSE_GUARD):
    """Expand to an ``(n*m, n*m)`` dense array.

    Pass ``max_size=None`` to lift the size guard.
    """
    m, n = mat.m, mat.n
    size = n * m
    if max_size is not None and size > max_size:
        raise ValueError(f"dense expansion of size {size} exceeds guard {max_size}")
    dense = np.zeros((size, size))
    for k in range(n):
        rows = slice(k * m, (k + 1) * m)
        for offset, band in zip(range(-2, 3), mat.bands()):
            j = (k + offset) % n
            dense[rows, j * m:(j + 1) * m] = band[k]
    return dense


def residual_inf(mat, x, f):
    """Infinity norm of ``f - A x`` over all scalar entries."""
    f = as_block_vector(f, mat.m, mat.n)
    r = f - matvec(mat, x)
    return float(np.max(np.abs(r)))


def _fmt(value):
    return format(float(value), ".17g")


def write_system(mat, f):
    """Serialize a matrix and right-hand side to the text system format."""
    m, n = mat.m, mat.n
    f = as_block_vector(f, m, n)
    lines = [f"{SYSTEM_MAGIC} {FORMAT_VERSION}", f"{m} {n}"]
    for k in range(n):
        for band in mat.bands():
            lines.extend(" ".join(_fmt(v) for v in row) for row in band[k])
            lines.append("")
    lines.extend(" ".join(_fmt(v) for v in fk) for fk in f)
    return "\n".join(lines) + "\n"


def write_solution(x):
    """Serialize an ``(n, m)`` solution array."""
    x = np.asarray(x, dtype=np.float64)
    n, m = x.shape
    lines = [f"{SOLUTION_MAGIC} {FORMAT_VERSION}", f"{m} {n}"]
    lines.extend(" ".join(_fmt(v) for v in xk) for xk in x)
    return "\n".join(lines) + "\n"


class _Tokens:
    """Whitespace tokenizer that remembers the source line of each token."""

    def __init__(self, text):
        self._items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            self._items.extend((tok, lineno) for tok in line.split())
        self._pos = 0
        self.last_line = len(text.splitlines())

    def next(self, what):
        if self._pos >= len(self._items):
            raise FormatError(f"unexpected end of input, expected {what}", self.last_line)
        item = self._items[self._pos]
        self._pos += 1
        return item

    def real(self, what):
        tok, line = self.next(what)
        try:
            value = float(tok)
        except ValueError:
            raise FormatError(f"invalid real {tok!r} in {what}", line) from None
        if not np.isfinite(value):
            raise FormatError(f"non-finite value {tok!r} in {what}", line)
        return value

    def integer(self, what):
        tok, line = self.next(what)
        try:
            return int(tok), line
        except ValueError:
            raise FormatError(f"invalid integer {tok!r} for {what}", line) from None

    def finish(self):
        if self._pos < len(self._items):
            tok, line = self._items[self._pos]
            raise FormatError(f"unexpected trailing token {tok!r}", line)


def _read_header(tokens, magic):
    tok, line = tokens.next("header")
    if tok != magic:
        raise FormatError(f"expected magic {magic!r}, got {tok!r}", line)
    version, line = tokens.next("format version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version!r}", line)
    m, line = tokens.integer("m")
    if m < 1:
        raise FormatError(f"m must be >= 1, got m={m}", line)
    n, line = tokens.integer("n")
    return m, n, line


def read_system(text):
    """Parse the text system format; returns ``(matrix, f)``."""
    tokens = _Tokens(text)
    m, n, line = _read_header(tokens, SYSTEM_MAGIC)
    if n < MIN_BLOCK_ROWS:
        raise FormatError(f"n must be >= {MIN_BLOCK_ROWS}, got n={n}", line)
    bands = np.empty((5, n, m, m))
    for k in range(n):
        for b, name in enumerate(BANDS):
            what = f"block {name}_{k + 1}"
            for i in range(m):
                for j in range(m):
                    bands[b, k, i, j] = tokens.real(what)
    f = np.empty((n, m))
    for k in range(n):
        for i in range(m):
            f[k, i] = tokens.real(f"f_{k + 1}")
    tokens.finish()
    return BlockPentaCyclic(*bands), f


def read_solution(text):
    """Parse the solution format; returns an ``(n, m)`` array."""
    tokens = _Tokens(text)
    m, n, _ = _read_header(tokens, SOLUTION_MAGIC)
    x = np.empty((n, m))
    for k in range(n):
        for i in range(m):
            x[k, i] = tokens.real(f"x_{k + 1}")
    tokens.finish()
    return x
