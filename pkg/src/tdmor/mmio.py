"""Matrix Market coordinate files, real general/symmetric only.

Format accepted, exactly: a header line
``%%MatrixMarket matrix coordinate real (general|symmetric)``, optional
``%`` comment lines, one size line ``rows cols nnz``, then nnz entry lines
``i j value`` with 1-based indices.  Symmetric files store the lower
triangle only and are expanded on read.
"""

import numpy as np
import scipy.sparse as sp

from .exceptions import HeaderMismatch, IndexOutOfRange, ParseError

__all__ = ["read_matrix_market", "write_matrix_market"]


def read_matrix_market(path):
    """Parse a coordinate real general/symmetric file into a CSC matrix."""
    with open(path) as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", line=1)
    header = lines[0].strip().split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise HeaderMismatch(f"not a MatrixMarket header: {lines[0].strip()!r}", line=1)
    _, obj, fmt, field, symmetry = (w.lower() for w in header)
    if obj != "matrix" or fmt != "coordinate":
        raise HeaderMismatch(f"only coordinate matrices are supported, got {fmt!r}", line=1)
    if field != "real":
        raise HeaderMismatch(f"only real field is supported, got {field!r}", line=1)
    if symmetry not in ("general", "symmetric"):
        raise HeaderMismatch(f"only general/symmetric are supported, got {symmetry!r}", line=1)

    lineno = 1
    body = []
    for raw in lines[1:]:
        lineno += 1
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        body.append((lineno, text))
    if not body:
        raise ParseError("missing size line", line=lineno)

    size_lineno, size_text = body[0]
    parts = size_text.split()
    if len(parts) != 3:
        raise ParseError(f"size line must be 'rows cols nnz', got {size_text!r}", line=size_lineno)
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"bad size line {size_text!r}", line=size_lineno) from exc
    entries = body[1:]
    if len(entries) != nnz:
        raise ParseError(
            f"expected {nnz} entries, found {len(entries)}",
            line=entries[-1][0] if entries else size_lineno,
        )
    I = np.empty(nnz, dtype=np.int64)
    J = np.empty(nnz, dtype=np.int64)
    X = np.empty(nnz, dtype=float)
    for k, (ln, text) in enumerate(entries):
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(f"entry must be 'i j value', got {text!r}", line=ln)
        try:
            i, j, x = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad entry {text!r}", line=ln) from exc
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise IndexOutOfRange(f"index ({i}, {j}) outside {rows}x{cols}", line=ln)
        if symmetry == "symmetric" and j > i:
            raise ParseError("symmetric files must store the lower triangle", line=ln)
        I[k], J[k], X[k] = i - 1, j - 1, x
    M = sp.coo_matrix((X, (I, J)), shape=(rows, cols))
    if symmetry == "symmetric":
        off = sp.coo_matrix((X[I != J], (J[I != J], I[I != J])), shape=(rows, cols))
        M = M + off
    return M.tocsc()


def write_matrix_market(path, M, symmetry="general"):
    """Write a CSC/COO matrix as coordinate real, full double precision."""
    if symmetry not in ("general", "symmetric"):
        raise ValueError(f"unsupported symmetry {symmetry!r}")
    M = sp.coo_matrix(M)
    I, J, X = M.row, M.col, M.data
    if symmetry == "symmetric":
        keep = I >= J
        I, J, X = I[keep], J[keep], X[keep]
    order = np.lexsort((I, J))
    with open(path, "w") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate real {symmetry}\n")
        fh.write(f"{M.shape[0]} {M.shape[1]} {len(X)}\n")
        for k in order:
            fh.write(f"{I[k] + 1} {J[k] + 1} {X[k]:.17g}\n")
