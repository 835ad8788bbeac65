"""File formats for the command-line surface.

Matrices travel as Matrix Market array files (``%%MatrixMarket matrix array
real symmetric``, lower triangle in column-major order, or ``general`` with
every entry) or as a structured-text form with an explicit dimension and row
lists.  Subspace bases use a structured-text form whose entries may be decimal
or ``p/q`` rational literals; rational literals survive parsing unrounded and
mark the file as exact-capable.  Reports are deterministic JSON.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParseError, UsageError
from .eigen import SymmetricMatrix
from .linalg import Backend

MM_BANNER = "%%MatrixMarket"


def sha256_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def parse_scalar_token(token: str) -> Fraction:
    """Parse a decimal or p/q literal exactly."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse numeric literal {token!r}: {exc}") from None


# ---------------------------------------------------------------------------
# matrices


def read_matrix_file(path) -> SymmetricMatrix:
    """Load a symmetric matrix from Matrix Market or structured text."""
    text = _read_text(path)
    try:
        if text.lstrip().startswith(MM_BANNER):
            return _parse_matrix_market(text, path)
        return _parse_matrix_text(text, path)
    except ParseError:
        raise
    except UsageError as exc:  # content checks (symmetry, finiteness) are parse failures here
        raise ParseError(f"{path}: {exc}") from None


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _parse_matrix_market(text: str, path) -> SymmetricMatrix:
    lines = text.splitlines()
    header = lines[0].split()
    if len(header) != 5 or header[0] != MM_BANNER:
        raise ParseError(f"{path}: malformed MatrixMarket header: {lines[0]!r}")
    obj, fmt, field, symmetry = (part.lower() for part in header[1:])
    if obj != "matrix" or fmt != "array":
        raise ParseError(f"{path}: only 'matrix array' MatrixMarket files are supported")
    if field != "real":
        raise ParseError(f"{path}: only real-valued matrices are supported, got {field!r}")
    if symmetry not in ("general", "symmetric"):
        raise ParseError(f"{path}: unsupported symmetry {symmetry!r}")

    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError(f"{path}: missing size line")
    size_tokens = body[0].split()
    if len(size_tokens) != 2:
        raise ParseError(f"{path}: size line must hold two integers, got {body[0]!r}")
    try:
        rows, cols = int(size_tokens[0]), int(size_tokens[1])
    except ValueError:
        raise ParseError(f"{path}: size line must hold two integers, got {body[0]!r}") from None
    if rows != cols:
        raise ParseError(f"{path}: matrix must be square, got {rows} x {cols}")
    values = [float(parse_scalar_token(tok)) for ln in body[1:] for tok in ln.split()]

    n = rows
    M = np.zeros((n, n))
    if symmetry == "general":
        if len(values) != n * n:
            raise ParseError(f"{path}: expected {n * n} entries, found {len(values)}")
        M = np.array(values).reshape((n, n), order="F")  # column-major per the format
    else:
        expected = n * (n + 1) // 2
        if len(values) != expected:
            raise ParseError(
                f"{path}: symmetric array files carry the lower triangle "
                f"({expected} entries), found {len(values)}"
            )
        it = iter(values)
        for j in range(n):
            for i in range(j, n):
                M[i, j] = next(it)
                M[j, i] = M[i, j]
    return SymmetricMatrix.from_rows(M)


def write_matrix_market(path, M: SymmetricMatrix) -> None:
    """Write the lower triangle in column-major order, one entry per line."""
    lines = [f"{MM_BANNER} matrix array real symmetric", f"{M.n} {M.n}"]
    for j in range(M.n):
        for i in range(j, M.n):
            lines.append(repr(float(M.entries[i, j])))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_matrix_text(text: str, path) -> SymmetricMatrix:
    dim = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "dim":
            if dim is not None:
                raise ParseError(f"{path}:{lineno}: duplicate 'dim' line")
            try:
                dim = int(rest)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: 'dim' needs an integer, got {rest!r}") from None
        elif key == "row":
            rows.append([float(parse_scalar_token(tok)) for tok in rest.split()])
        else:
            raise ParseError(f"{path}:{lineno}: expected 'dim' or 'row', got {key!r}")
    if dim is None:
        raise ParseError(f"{path}: missing 'dim' line")
    if len(rows) != dim:
        raise ParseError(f"{path}: expected {dim} 'row' lines, found {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != dim:
            raise ParseError(f"{path}: row {i} has {len(row)} entries, expected {dim}")
    return SymmetricMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# subspace bases


@dataclass(frozen=True)
class BasisFile:
    """Parsed basis file: exact rational entries plus a rational-literal flag."""

    ambient_dim: int
    vectors: tuple[tuple[Fraction, ...], ...]
    has_rational_literals: bool


def read_basis_file(path) -> BasisFile:
    ambient = None
    vectors = []
    saw_rational = False
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "ambient_dim":
            if ambient is not None:
                raise ParseError(f"{path}:{lineno}: duplicate 'ambient_dim' line")
            try:
                ambient = int(rest)
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: 'ambient_dim' needs an integer, got {rest!r}"
                ) from None
            if ambient < 1:
                raise ParseError(f"{path}:{lineno}: ambient_dim must be >= 1")
        elif key == "vector":
            tokens = rest.split()
            saw_rational = saw_rational or any("/" in tok for tok in tokens)
            vectors.append(tuple(parse_scalar_token(tok) for tok in tokens))
        else:
            raise ParseError(f"{path}:{lineno}: expected 'ambient_dim' or 'vector', got {key!r}")
    if ambient is None:
        raise ParseError(f"{path}: missing 'ambient_dim' line")
    for i, vec in enumerate(vectors):
        if len(vec) != ambient:
            raise ParseError(f"{path}: vector {i} has {len(vec)} entries, expected {ambient}")
    return BasisFile(ambient_dim=ambient, vectors=tuple(vectors), has_rational_literals=saw_rational)


def basis_columns_array(basis: BasisFile, mode: Backend) -> np.ndarray:
    """The file's vectors as matrix columns under the requested backend."""
    n, k = basis.ambient_dim, len(basis.vectors)
    if mode is Backend.EXACT:
        out = np.empty((n, k), dtype=object)
        for j, vec in enumerate(basis.vectors):
            for i, entry in enumerate(vec):
                out[i, j] = entry
        return out
    out = np.zeros((n, k))
    for j, vec in enumerate(basis.vectors):
        for i, entry in enumerate(vec):
            out[i, j] = float(entry)
    return out


# ---------------------------------------------------------------------------
# reports


def vector_payload(vec: np.ndarray, mode: Backend) -> list:
    if mode is Backend.EXACT:
        return [str(Fraction(entry)) for entry in vec]
    return [float(entry) for entry in vec]


def parse_vector_payload(payload, mode: Backend) -> list:
    if mode is Backend.EXACT:
        return [Fraction(str(entry)) for entry in payload]
    return [float(entry) for entry in payload]


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def load_report(path) -> dict:
    try:
        report = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(report, dict) or "kind" not in report:
        raise ParseError(f"{path}: report must be a JSON object with a 'kind' field")
    return report
