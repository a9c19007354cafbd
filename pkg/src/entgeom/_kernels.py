"""Row reduction over F_p.

Two interchangeable implementations of the same in-place forward elimination:
a numba ``@njit`` kernel and a vectorised numpy path.  Set
``ENTGEOM_DISABLE_NUMBA=1`` to force the numpy path (or when numba is not
installed).  Both return identical ranks and identical reduced matrices.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("ENTGEOM_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def eliminate_numpy(M: np.ndarray, p: int, npivot: int) -> int:
    """Forward-eliminate ``M`` (int64, entries in [0, p)) in place; pivots only in the first ``npivot`` columns."""
    m, n = M.shape
    rank = 0
    for col in range(npivot):
        if rank == m:
            break
        nz = np.flatnonzero(M[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        row = M[rank]
        inv = _inv_mod(row[col], p)
        if inv != 1:
            row[col:] = (row[col:] * inv) % p
        last = col + np.flatnonzero(row[col:]).max()
        below = rank + 1 + np.flatnonzero(M[rank + 1:, col])
        if below.size:
            c = M[below, col][:, None]
            M[below, col:last + 1] = (M[below, col:last + 1] - c * row[col:last + 1]) % p
        rank += 1
    return rank


if numba is not None:

    @numba.njit(cache=True)
    def _eliminate_nb(M, p, npivot):  # pragma: no cover - compiled
        m, n = M.shape
        rank = 0
        for col in range(npivot):
            if rank == m:
                break
            piv = -1
            for r in range(rank, m):
                if M[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(n):
                    t = M[rank, j]
                    M[rank, j] = M[piv, j]
                    M[piv, j] = t
            # modular inverse by exponentiation
            a = M[rank, col]
            inv = 1
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = (inv * a) % p
                a = (a * a) % p
                e >>= 1
            last = col
            for j in range(col, n):
                if M[rank, j] != 0:
                    M[rank, j] = (M[rank, j] * inv) % p
                    last = j
            for r in range(rank + 1, m):
                c = M[r, col]
                if c != 0:
                    for j in range(col, last + 1):
                        M[r, j] = (M[r, j] - c * M[rank, j]) % p
            rank += 1
        return rank


def eliminate(M: np.ndarray, p: int, npivot: int | None = None, use_numba: bool | None = None) -> int:
    """In-place forward elimination mod p; returns the rank of the first ``npivot`` columns."""
    if npivot is None:
        npivot = M.shape[1]
    if use_numba is None:
        use_numba = USE_NUMBA
    if M.size == 0:
        return 0
    if use_numba:
        return int(_eliminate_nb(M, np.int64(p), np.int64(npivot)))
    return eliminate_numpy(M, p, npivot)


def rank_mod_p(M: np.ndarray, p: int, use_numba: bool | None = None) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    A = np.ascontiguousarray(M, dtype=np.int64) % p
    return eliminate(A, p, use_numba=use_numba)
