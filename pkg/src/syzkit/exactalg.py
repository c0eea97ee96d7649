"""Exact dense linear algebra over a prime field F_p.

Everything in this module is integer arithmetic mod p; no floating point
ever reaches a result.  Matrices are numpy int64 arrays with entries
reduced to [0, p).  Row reduction folds whole row blocks with matmuls so
the bulk of the work runs through BLAS: float64 holds every intermediate
value exactly because block heights and the field size keep all products
below 2**53 (p < 2**15.5 and blocks of at most _BLOCK rows give entries
bounded by _BLOCK * (p-1)**2 < 2**40).

Reduced row echelon form is unique for a given column order, so every
basis handed out here (kernels, row spaces, complements) is canonical and
reproducible bit for bit, independent of blocking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_CHAR = 32003
CROSSCHECK_CHAR = 31991

# Row-block height for the BLAS-backed elimination.  Fixed constant (never
# environment dependent) so runs are bit-identical across machines.
_BLOCK = 512

_MAX_EXACT = float(2**53)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p.  `char` is validated on construction."""

    char: int

    def __post_init__(self):
        from .errors import InputError

        if not isinstance(self.char, int) or not is_prime(self.char):
            raise InputError(f"field characteristic must be prime, got {self.char!r}")

    def reduce(self, a: int) -> int:
        return a % self.char

    def inv(self, a: int) -> int:
        a %= self.char
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.char)
        return pow(a, -1, self.char)

    def sqrt(self, a: int) -> int | None:
        """A square root of a mod p, or None if a is not a square."""
        p = self.char
        a %= p
        if a == 0:
            return 0
        if p == 2:
            return a
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # Tonelli-Shanks for p = 1 mod 4.
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) == 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    # Bound methods so callers holding a FieldSpec don't thread `p` around.
    def rank(self, m) -> int:
        return rank(m, self.char)

    def rref(self, m):
        return rref(m, self.char)

    def kernel_basis(self, m):
        return kernel_basis(m, self.char)

    def in_span(self, v, m):
        return in_span(v, m, self.char)


def as_field_matrix(m, p: int) -> np.ndarray:
    """Coerce to a 2-D int64 array with entries reduced mod p."""
    a = np.asarray(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    return a % p


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of m over F_p.

    Returns (R, pivots): R keeps one row per pivot (zero rows dropped),
    each pivot entry is 1 with zeros above and below, and rows are sorted
    by pivot column.  `pivots` is the increasing list of pivot columns.
    """
    a = as_field_matrix(m, p)
    nrows, ncols = a.shape
    # exactness guard: a dot product over k pivots peaks at k * (p-1)^2
    if (p - 1) ** 2 * max(min(nrows, ncols), _BLOCK) >= 2**53:
        raise ValueError(
            f"characteristic {p} too large for exact float64 elimination at this size"
        )
    reduced = np.zeros((0, ncols), dtype=np.float64)
    pivots: list[int] = []
    for start in range(0, nrows, _BLOCK):
        blk = a[start : start + _BLOCK].astype(np.float64)
        if pivots:
            coeff = blk[:, pivots]
            if np.any(coeff):
                blk = (blk - coeff @ reduced) % p
        # Block-local RREF: global pivot columns are already zero here, so
        # every pivot found below sits in a fresh column.
        nb = blk.shape[0]
        row_at = 0
        local_cols: list[int] = []
        for col in range(ncols):
            if row_at == nb:
                break
            nz = np.nonzero(blk[row_at:, col])[0]
            if nz.size == 0:
                continue
            lead = row_at + int(nz[0])
            if lead != row_at:
                blk[[row_at, lead]] = blk[[lead, row_at]]
            inv = pow(int(blk[row_at, col]), -1, p)
            blk[row_at] = (blk[row_at] * inv) % p
            fac = blk[:, col].copy()
            fac[row_at] = 0
            hit = np.nonzero(fac)[0]
            if hit.size:
                blk[hit] = (blk[hit] - np.outer(fac[hit], blk[row_at])) % p
            local_cols.append(col)
            row_at += 1
        if not local_cols:
            continue
        local = blk[:row_at]
        if pivots:
            fac = reduced[:, local_cols]
            if np.any(fac):
                reduced = (reduced - fac @ local) % p
        reduced = np.vstack([reduced, local])
        pivots.extend(local_cols)
        order = np.argsort(pivots, kind="stable")
        reduced = reduced[order]
        pivots = sorted(pivots)
    assert reduced.size == 0 or reduced.max() < _MAX_EXACT
    return reduced.astype(np.int64), pivots


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


def kernel_basis(m, p: int) -> np.ndarray:
    """Basis of {x : m @ x = 0} over F_p, as rows of an int64 array.

    One basis vector per free column, in increasing free-column order,
    normalized so the free-coordinate block is the identity (entry 1 at
    its own free column, zeros at every other free column).  This is the
    reduced echelon normal form with respect to the fixed column order,
    hence canonical.
    """
    a = as_field_matrix(m, p)
    ncols = a.shape[1]
    reduced, pivots = rref(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for k, c in enumerate(pivots):
            out[i, c] = (-int(reduced[k, f])) % p
    return out


def in_span(v, m, p: int) -> tuple[bool, np.ndarray | None]:
    """Is v in the column span of m?  Returns (flag, witness).

    When flag is True, witness w satisfies m @ w = v (mod p); otherwise
    witness is None.
    """
    a = as_field_matrix(m, p)
    vec = np.asarray(v, dtype=np.int64).reshape(-1) % p
    if vec.shape[0] != a.shape[0]:
        raise ValueError(f"vector length {vec.shape[0]} != row count {a.shape[0]}")
    aug = np.hstack([a, vec[:, None]])
    reduced, pivots = rref(aug, p)
    if a.shape[1] in pivots:
        return False, None
    witness = np.zeros(a.shape[1], dtype=np.int64)
    for k, c in enumerate(pivots):
        witness[c] = reduced[k, -1]
    return True, witness


def row_space_contains(v, reduced: np.ndarray, pivots: list[int], p: int) -> bool:
    """Membership of v in a row space given its RREF (fast path)."""
    vec = np.asarray(v, dtype=np.int64).reshape(-1) % p
    if len(pivots) == 0:
        return not np.any(vec)
    res = (vec - vec[pivots] @ reduced) % p
    return not np.any(res)


def matrix_inverse(m, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p; raises ValueError if singular."""
    a = as_field_matrix(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"not square: {a.shape}")
    aug = np.hstack([a, np.eye(n, dtype=np.int64)])
    reduced, pivots = rref(aug, p)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return reduced[:, n:]


def complement_basis(sub, full, p: int) -> np.ndarray:
    """Rows extending row-space(sub) to row-space(sub) + row-space(full).

    Returns the rows of rref(stack(sub, full)) whose pivot column is not a
    pivot column of rref(sub).  These are independent modulo sub and span
    a complement of sub inside sub + full; the result depends only on the
    two row spaces, hence canonical.
    """
    sub = as_field_matrix(sub, p) if len(sub) else np.zeros((0, as_field_matrix(full, p).shape[1]), dtype=np.int64)
    full = as_field_matrix(full, p)
    _, sub_piv = rref(sub, p)
    stacked = np.vstack([sub, full]) if sub.size else full
    reduced, pivots = rref(stacked, p)
    sub_set = set(sub_piv)
    keep = [k for k, c in enumerate(pivots) if c not in sub_set]
    return reduced[keep]
