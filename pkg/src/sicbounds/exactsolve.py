"""Exact rational linear algebra used by the LP bound.

Three layers, all returning Fractions:

* dense Gaussian elimination for small square systems;
* p-adic lifting (solve mod p, lift digits, reconstruct rationals) for
  large square integer systems, with numpy carrying the mod-p work;
* a dense two-phase tableau simplex with Bland's rule for small LPs,
  used both as the primary solver at tiny sizes and as the fallback
  when the float-seeded vertex pipeline cannot be certified.

Sparse constraint rows are (cols, coefs) pairs of equal-length tuples;
coefficients are ints or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

Row = tuple[tuple[int, ...], tuple[int, ...]]


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % q == 0:
            return x == q
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        v = pow(a, d, x)
        if v in (1, x - 1):
            continue
        for _ in range(s - 1):
            v = v * v % x
            if v == x - 1:
                break
        else:
            return False
    return True


def _primes_near_2_20(count: int) -> list[int]:
    out = []
    x = (1 << 20) - 1
    while len(out) < count:
        if _is_prime(x):
            out.append(x)
        x -= 2
    return out


_PRIMES = _primes_near_2_20(4)


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Smallest fraction congruent to a mod m, with |num|, den <= sqrt(m/2)."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        return Fraction(-r1, -s1)
    return Fraction(r1, s1)


def fraction_gauss_solve(
    a: list[list[Fraction]], b: list[Fraction]
) -> list[Fraction] | None:
    """Dense exact solve of a square system; None when singular."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(bv)] for row, bv in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        prow = m[col]
        pv = prow[col]
        if pv != 1:
            for j in range(col, n + 1):
                prow[j] /= pv
        for r in range(n):
            if r == col:
                continue
            f = m[r][col]
            if f == 0:
                continue
            row = m[r]
            for j in range(col, n + 1):
                row[j] -= f * prow[j]
    return [m[r][n] for r in range(n)]


def rows_to_dense(rows: list[Row], n_cols: int) -> np.ndarray:
    out = np.zeros((len(rows), n_cols), dtype=np.int64)
    for r, (cols, coefs) in enumerate(rows):
        for c, v in zip(cols, coefs):
            out[r, c] = v
    return out


def independent_rows_mod_p(
    mat: np.ndarray, p: int
) -> tuple[list[int], list[int]]:
    """Greedy pivot selection mod p.

    Returns (original indices of pivot rows, pivot columns), one per
    conquered column; len < n_cols means the rows do not pin every
    column even mod p.
    """
    work = (mat % p).astype(np.int64)
    m, n = work.shape
    idx = list(range(m))
    r = 0
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for col in range(n):
        sub = work[r:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        t = r + int(nz[0])
        if t != r:
            work[[r, t]] = work[[t, r]]
            idx[r], idx[t] = idx[t], idx[r]
        inv = pow(int(work[r, col]), p - 2, p)
        work[r] = work[r] * inv % p
        below = work[r + 1 :, col]
        mask = below != 0
        if mask.any():
            work[r + 1 :][mask] = (
                work[r + 1 :][mask] - np.outer(below[mask], work[r])
            ) % p
        pivot_rows.append(idx[r])
        pivot_cols.append(col)
        r += 1
        if r == m:
            break
    return pivot_rows, pivot_cols


def _mod_inverse_matrix(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    work = (a % p).astype(np.int64)
    inv = np.eye(n, dtype=np.int64)
    for col in range(n):
        nz = np.nonzero(work[col:, col])[0]
        if nz.size == 0:
            return None
        t = col + int(nz[0])
        if t != col:
            work[[col, t]] = work[[t, col]]
            inv[[col, t]] = inv[[t, col]]
        s = pow(int(work[col, col]), p - 2, p)
        work[col] = work[col] * s % p
        inv[col] = inv[col] * s % p
        factors = work[:, col].copy()
        factors[col] = 0
        rows = np.nonzero(factors)[0]
        if rows.size:
            work[rows] = (work[rows] - np.outer(factors[rows], work[col])) % p
            inv[rows] = (inv[rows] - np.outer(factors[rows], inv[col])) % p
    return inv


def dixon_solve(a: np.ndarray, b: np.ndarray) -> list[Fraction] | None:
    """Exact solve of a square integer system by p-adic lifting.

    Digits are produced with int64 numpy throughout (entries stay below
    2^20, products below 2^50); the assembled p-adic expansion is
    reconstructed coordinate-wise, doubling the digit count until every
    coordinate reconstructs, capped by the Hadamard bound.
    """
    n = a.shape[0]
    for p in _PRIMES:
        inv = _mod_inverse_matrix(a, p)
        if inv is not None:
            break
    else:
        return None

    norms = np.sqrt((a.astype(float) ** 2).sum(axis=1))
    norms[norms < 1] = 1
    log2_det = float(np.log2(norms).sum())
    bmax = float(np.abs(b).max()) if len(b) else 1.0
    cap_bits = 2 * (log2_det + np.log2(max(bmax, 1.0)) + 2) + 8
    cap = max(8, int(cap_bits / np.log2(p)) + 2)

    digits: list[np.ndarray] = []
    r = b.astype(np.int64).copy()
    target = 8

    while True:
        while len(digits) < min(target, cap):
            xi = inv.dot(r % p) % p
            digits.append(xi)
            r = (r - a.dot(xi)) // p
        pk = p ** len(digits)
        xs: list[Fraction] = []
        ok = True
        for j in range(n):
            v = 0
            mult = 1
            for d in digits:
                v += int(d[j]) * mult
                mult *= p
            f = rational_reconstruct(v, pk)
            if f is None:
                ok = False
                break
            xs.append(f)
        if ok:
            return xs
        if len(digits) >= cap:
            return None
        target = len(digits) * 2


def solve_square_rows(
    rows: list[Row], rhs: list, n_cols: int
) -> list[Fraction] | None:
    """Exact solve of a (selected, square) sparse system."""
    if len(rows) != n_cols:
        raise ValueError("square system expected")
    if n_cols <= 150:
        dense = [[Fraction(0)] * n_cols for _ in range(n_cols)]
        for r, (cols, coefs) in enumerate(rows):
            for c, v in zip(cols, coefs):
                dense[r][c] = Fraction(v)
        return fraction_gauss_solve(dense, [Fraction(v) for v in rhs])
    a = rows_to_dense(rows, n_cols)
    b = np.array([int(v) for v in rhs], dtype=np.int64)
    return dixon_solve(a, b)


def eval_row(row: Row, x: list[Fraction]) -> Fraction:
    cols, coefs = row
    total = Fraction(0)
    for c, v in zip(cols, coefs):
        xv = x[c]
        if xv:
            total += v * xv
    return total


# ----------------------------------------------------------------------
# Dense exact simplex (two-phase, Bland's rule).  Variables are x >= 0;
# use only on LPs whose constraints already imply the sign restriction.


class SimplexResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status: str, x: list[Fraction] | None, value):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.value = value


def simplex_solve(
    n_vars: int,
    objective: list[Fraction],
    rows: list[Row],
    senses: list[str],
    rhs: list,
    cell_limit: int = 600_000,
) -> SimplexResult:
    """Maximize objective subject to sparse rows with senses "<=" or "=".

    Exact dense tableau; sized for small instances only.
    """
    m = len(rows)
    slack_of: dict[int, int] = {}
    n_slack = 0
    for i, s in enumerate(senses):
        if s == "<=":
            slack_of[i] = n_slack
            n_slack += 1
    n_art = m  # one artificial per row keeps the bookkeeping simple
    total = n_vars + n_slack + n_art
    if (m + 1) * (total + 1) > cell_limit:
        raise ValueError("system too large for the dense exact solver")

    t = [[Fraction(0)] * (total + 1) for _ in range(m + 1)]
    for i, ((cols, coefs), s, bv) in enumerate(zip(rows, senses, rhs)):
        bi = Fraction(bv)
        row = t[i]
        for c, v in zip(cols, coefs):
            row[c] = Fraction(v)
        if s == "<=":
            row[n_vars + slack_of[i]] = Fraction(1)
        if bi < 0:
            for j in range(total):
                row[j] = -row[j]
            bi = -bi
        row[total] = bi
        row[n_vars + n_slack + i] = Fraction(1)
    basis = [n_vars + n_slack + i for i in range(m)]

    def pivot(prow: int, pcol: int) -> None:
        pr = t[prow]
        pv = pr[pcol]
        if pv != 1:
            for j in range(total + 1):
                if pr[j]:
                    pr[j] /= pv
        for r in range(m + 1):
            if r == prow:
                continue
            f = t[r][pcol]
            if f == 0:
                continue
            row = t[r]
            for j in range(total + 1):
                if pr[j]:
                    row[j] -= f * pr[j]

    def run(allowed: int) -> str:
        # Objective row t[m] holds reduced costs for minimization.
        while True:
            obj = t[m]
            enter = next(
                (j for j in range(allowed) if obj[j] < 0), None
            )
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for r in range(m):
                a = t[r][enter]
                if a > 0:
                    ratio = t[r][total] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and basis[r] < basis[leave])
                    ):
                        best = ratio
                        leave = r
            if leave is None:
                return "unbounded"
            basis[leave] = enter
            pivot(leave, enter)

    # Phase 1: minimize the artificial sum.
    art0 = n_vars + n_slack
    obj = t[m]
    for j in range(total + 1):
        obj[j] = Fraction(0)
    for i in range(m):
        row = t[i]
        for j in range(total + 1):
            obj[j] -= row[j]
    for i in range(m):
        obj[art0 + i] = Fraction(0)
    run(art0)
    if t[m][total] < 0:
        return SimplexResult("infeasible", None, None)
    # Remove artificials still sitting in the basis.
    for r in range(m):
        if basis[r] >= art0:
            enter = next(
                (j for j in range(art0) if t[r][j] != 0), None
            )
            if enter is not None:
                basis[r] = enter
                pivot(r, enter)
            # else: redundant row; its artificial stays basic at 0.

    # Phase 2: minimize -objective.
    for j in range(total + 1):
        t[m][j] = Fraction(0)
    for j in range(n_vars):
        t[m][j] = -Fraction(objective[j])
    for r in range(m):
        f = t[m][basis[r]]
        if f != 0:
            row = t[r]
            orow = t[m]
            for j in range(total + 1):
                if row[j]:
                    orow[j] -= f * row[j]
    status = run(art0)
    if status == "unbounded":
        return SimplexResult("unbounded", None, None)
    x = [Fraction(0)] * n_vars
    for r in range(m):
        if basis[r] < n_vars:
            x[basis[r]] = t[r][total]
    value = sum(Fraction(objective[j]) * x[j] for j in range(n_vars))
    return SimplexResult("optimal", x, value)
