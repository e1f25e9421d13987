"""Integer-lattice machinery for expansive dilation matrices.

A dilation matrix M is a square integer matrix whose eigenvalues all have
modulus larger than one.  It splits Z^s into m = |det M| cosets indexed by
a digit set E, and pairs them with m unimodular evaluation points
Xi = {exp(2 pi i M^{-T} xi)} generalizing the m-th roots of unity.

Everything constructed here is immutable and safe to share between threads.
"""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "LatticeError",
    "DilationMatrix",
    "coset_reps",
    "dual_coset_points",
    "q_eval",
    "v_sets",
    "VPoint",
    "param_points",
    "same_coset",
    "transversals_equivalent",
    "as_tau",
    "as_multi_index",
    "as_complex_vector",
]

# Powers M^{-p} are formed in double precision; entries shrink with p because
# the spectral radius of M^{-1} is below one, but we still cap the exponent.
MAX_INV_POWER = 64
_EIG_TOL = 1e-9


class LatticeError(ValueError):
    """Invalid dilation matrix or lattice operation."""


def _int_det(mat: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [[int(x) for x in row] for row in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _row_hnf(mat):
    """Row-style Hermite normal form over the integers.

    Returns (H, U, V) with H = U @ mat, V = U^{-1}, U unimodular, H upper
    triangular with positive diagonal and above-diagonal entries reduced
    into [0, diagonal).
    """
    s = len(mat)
    H = [[int(x) for x in row] for row in mat]
    U = [[int(i == j) for j in range(s)] for i in range(s)]
    V = [[int(i == j) for j in range(s)] for i in range(s)]

    def row_op(i, j, q):
        # r_i <- r_i - q r_j on H and U; V absorbs the inverse column op.
        for c in range(s):
            H[i][c] -= q * H[j][c]
            U[i][c] -= q * U[j][c]
        for r in range(s):
            V[r][j] += q * V[r][i]

    def swap(i, j):
        H[i], H[j] = H[j], H[i]
        U[i], U[j] = U[j], U[i]
        for r in range(s):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def negate(i):
        for c in range(s):
            H[i][c] = -H[i][c]
            U[i][c] = -U[i][c]
        for r in range(s):
            V[r][i] = -V[r][i]

    for j in range(s):
        if all(H[i][j] == 0 for i in range(j, s)):
            raise LatticeError("singular matrix has no Hermite normal form basis")
        while any(H[i][j] != 0 for i in range(j + 1, s)):
            pivot = min(
                (i for i in range(j, s) if H[i][j] != 0),
                key=lambda i: abs(H[i][j]),
            )
            if pivot != j:
                swap(j, pivot)
            for i in range(j + 1, s):
                if H[i][j] != 0:
                    row_op(i, j, H[i][j] // H[j][j])
        if H[j][j] < 0:
            negate(j)
    for j in range(s):
        for i in range(j):
            q = H[i][j] // H[j][j]
            if q:
                row_op(i, j, q)
    return H, U, V


def _frac_inverse(mat):
    """Exact inverse of an integer matrix as a tuple of Fraction rows."""
    n = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise LatticeError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


class DilationMatrix:
    """Expansive integer matrix driving the refinement Z^s -> M^{-1} Z^s.

    Carries the arity m = |det M|, a canonical coset transversal E of
    Z^s / M Z^s, and the dual evaluation set Xi built from Z^s / M^T Z^s.
    """

    def __init__(self, entries):
        rows = self._coerce_rows(entries)
        self.s = len(rows)
        if any(len(r) != self.s for r in rows):
            raise LatticeError("dilation matrix must be square")
        self.mat = tuple(tuple(int(x) for x in r) for r in rows)
        self.det = _int_det(self.mat)
        if self.det == 0:
            raise LatticeError("dilation matrix must be nonsingular")
        self.m = abs(self.det)
        if self.m < 2:
            raise LatticeError("|det M| must be at least 2")
        eigs = np.linalg.eigvals(np.array(self.mat, dtype=float))
        if np.min(np.abs(eigs)) <= 1.0 + _EIG_TOL:
            raise LatticeError(
                "all eigenvalues of a dilation matrix must exceed 1 in modulus"
            )
        self._H, self._U, self._V = _row_hnf(self.mat)
        self._inv_frac = _frac_inverse(self.mat)
        # adjugate: integer matrix with M^{-1} = adj / det
        self._adj = tuple(
            tuple(int(x * self.det) for x in row) for row in self._inv_frac
        )
        self._inv = np.array([[float(x) for x in row] for row in self._inv_frac])
        self._inv_powers = {0: np.eye(self.s), 1: self._inv}
        self._coset_reps: list[tuple[int, ...]] | None = None
        self._dual: list[tuple[complex, ...]] | None = None
        self._dual_reps: list[tuple[int, ...]] | None = None

    @staticmethod
    def _coerce_rows(entries):
        if isinstance(entries, DilationMatrix):
            return [list(r) for r in entries.mat]
        if isinstance(entries, (int, np.integer)):
            return [[int(entries)]]
        if isinstance(entries, np.ndarray):
            entries = entries.tolist()
        rows = []
        for row in entries:
            if isinstance(row, (int, np.integer)):
                raise LatticeError("matrix entries must be nested rows (or a bare int for s=1)")
            cells = []
            for x in row:
                if isinstance(x, float) and not x.is_integer():
                    raise LatticeError("dilation matrix entries must be integers")
                cells.append(int(x))
            rows.append(cells)
        if not rows:
            raise LatticeError("empty matrix")
        return rows

    def __repr__(self):
        if self.s == 1:
            return f"DilationMatrix({self.mat[0][0]})"
        return f"DilationMatrix({[list(r) for r in self.mat]})"

    def __eq__(self, other):
        return isinstance(other, DilationMatrix) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    # -- exact integer algebra -------------------------------------------------

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """M @ vec over the integers."""
        return tuple(
            sum(self.mat[i][j] * int(vec[j]) for j in range(self.s))
            for i in range(self.s)
        )

    def solve_integer(self, vec: Sequence[int]) -> tuple[int, ...] | None:
        """Integer beta with M beta = vec, or None when vec is off-lattice."""
        y = [
            sum(self._adj[i][j] * int(vec[j]) for j in range(self.s))
            for i in range(self.s)
        ]
        if any(v % self.det for v in y):
            return None
        return tuple(v // self.det for v in y)

    def in_lattice(self, vec: Sequence[int]) -> bool:
        return self.solve_integer(vec) is not None

    def inv_power(self, p: int) -> np.ndarray:
        """M^{-p} in double precision, 0 <= p <= MAX_INV_POWER."""
        if not 0 <= p <= MAX_INV_POWER:
            raise LatticeError(f"inverse power {p} outside [0, {MAX_INV_POWER}]")
        got = self._inv_powers.get(p)
        if got is None:
            top = max(q for q in self._inv_powers if q <= p)
            got = self._inv_powers[top]
            for q in range(top + 1, p + 1):
                got = got @ self._inv
                self._inv_powers[q] = got
        return got

    def transpose(self) -> "DilationMatrix":
        return DilationMatrix([list(col) for col in zip(*self.mat)])

    # -- cosets ------------------------------------------------------------------

    def _box_digits(self, H) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(H[i][i]) for i in range(self.s)))

    def coset_reps(self) -> list[tuple[int, ...]]:
        """Canonical transversal E of Z^s / M Z^s, from the HNF digit box."""
        if self._coset_reps is None:
            reps = []
            for d in self._box_digits(self._H):
                reps.append(
                    tuple(
                        sum(self._V[i][j] * d[j] for j in range(self.s))
                        for i in range(self.s)
                    )
                )
            self._coset_reps = sorted(reps)
        return list(self._coset_reps)

    def coset_of(self, alpha: Sequence[int]) -> tuple[int, ...]:
        """The representative in coset_reps() equivalent to alpha mod M Z^s."""
        y = [
            sum(self._U[i][j] * int(alpha[j]) for j in range(self.s))
            for i in range(self.s)
        ]
        for ell in range(self.s - 1, -1, -1):
            q = y[ell] // self._H[ell][ell]
            if q:
                for r in range(ell + 1):
                    y[r] -= q * self._H[r][ell]
        return tuple(
            sum(self._V[i][j] * y[j] for j in range(self.s)) for i in range(self.s)
        )

    def dual_reps(self) -> list[tuple[int, ...]]:
        """Transversal of Z^s / M^T Z^s used to build the dual points."""
        if self._dual_reps is None:
            mt = [list(col) for col in zip(*self.mat)]
            H, _, V = _row_hnf(mt)
            reps = []
            for d in self._box_digits(H):
                reps.append(
                    tuple(
                        sum(V[i][j] * d[j] for j in range(self.s))
                        for i in range(self.s)
                    )
                )
            zero = (0,) * self.s
            reps.remove(zero)
            self._dual_reps = [zero] + sorted(reps)
        return list(self._dual_reps)

    def dual_points(self) -> list[tuple[complex, ...]]:
        """The set Xi = {exp(2 pi i M^{-T} xi)}; the all-ones point comes first."""
        if self._dual is None:
            inv_t = tuple(zip(*self._inv_frac))  # exact M^{-T}
            pts = []
            for xi in self.dual_reps():
                phases = [
                    sum(inv_t[i][j] * xi[j] for j in range(self.s))
                    for i in range(self.s)
                ]
                pts.append(
                    tuple(
                        cmath.exp(2j * cmath.pi * float(u % 1)) for u in phases
                    )
                )
            self._dual = pts
        return list(self._dual)


# -- module-level operation surface -------------------------------------------


def coset_reps(M: DilationMatrix) -> list[tuple[int, ...]]:
    """Transversal of Z^s / M Z^s containing the origin, lexicographically sorted."""
    return M.coset_reps()


def dual_coset_points(M: DilationMatrix) -> list[tuple[complex, ...]]:
    """Unimodular evaluation set Xi; entry 0 is the all-ones vector exactly."""
    return M.dual_points()


def same_coset(M: DilationMatrix, a: Sequence[int], b: Sequence[int]) -> bool:
    """Exact test for a = b mod M Z^s."""
    return M.in_lattice(tuple(int(x) - int(y) for x, y in zip(a, b)))


def transversals_equivalent(M: DilationMatrix, reps_a, reps_b) -> bool:
    """Do two lists represent the same cosets of Z^s / M Z^s, bijectively?"""
    canon_a = sorted(M.coset_of(r) for r in reps_a)
    canon_b = sorted(M.coset_of(r) for r in reps_b)
    return (
        len(reps_a) == len(reps_b)
        and len(set(canon_a)) == len(canon_a)
        and canon_a == canon_b
    )


def as_multi_index(gamma, s: int | None = None) -> tuple[int, ...]:
    if isinstance(gamma, (int, np.integer)):
        gamma = (int(gamma),)
    g = tuple(int(x) for x in gamma)
    if any(x < 0 for x in g):
        raise LatticeError("multi-index entries must be nonnegative")
    if s is not None and len(g) != s:
        raise LatticeError(f"multi-index has length {len(g)}, expected {s}")
    return g


def as_complex_vector(lam, s: int | None = None) -> tuple[complex, ...]:
    if isinstance(lam, (int, float, complex, np.number)):
        lam = (complex(lam),)
    v = tuple(complex(x) for x in lam)
    if s is not None and len(v) != s:
        raise LatticeError(f"vector has length {len(v)}, expected {s}")
    return v


def as_tau(tau, s: int) -> tuple[float, ...]:
    """Coerce a shift parameter to a real s-vector."""
    if isinstance(tau, (int, float, np.number)):
        tau = (float(tau),)
    t = tuple(float(x) for x in tau)
    if len(t) != s:
        raise LatticeError(f"shift parameter has length {len(t)}, expected {s}")
    if any(not np.isfinite(x) for x in t):
        raise LatticeError("shift parameter must be finite")
    return t


def q_eval(gamma, z) -> complex:
    """Falling-factorial product prod_l prod_{j<gamma_l} (z_l - j); empty = 1."""
    g = as_multi_index(gamma)
    zz = as_complex_vector(z, len(g))
    out = complex(1)
    for zl, gl in zip(zz, g):
        for j in range(gl):
            out *= zl - j
    return out


class VPoint(NamedTuple):
    """One evaluation point v_j = eps_j * exp(-(lambda^T M^{-(k+1)})_j)."""

    v: tuple[complex, ...]
    eps: tuple[complex, ...]
    lam: tuple[complex, ...]
    eps_is_one: bool


def v_sets(M: DilationMatrix, lambdas, k: int):
    """The evaluation sets (V_k, V'_k) for the frequencies in `lambdas`.

    V'_k drops the points built from the all-ones dual element.  Points are
    ordered by lambda (input order) and then by the dual-point order.
    """
    if k < 0:
        raise LatticeError("level k must be nonnegative")
    W = M.inv_power(k + 1)
    xi_pts = M.dual_points()
    full = []
    for lam in lambdas:
        lamv = as_complex_vector(lam, M.s)
        w = np.array(lamv) @ W
        base = tuple(cmath.exp(-w[j]) for j in range(M.s))
        for i, eps in enumerate(xi_pts):
            v = tuple(e * b for e, b in zip(eps, base))
            full.append(VPoint(v=v, eps=eps, lam=lamv, eps_is_one=(i == 0)))
    prime = [p for p in full if not p.eps_is_one]
    return full, prime


def param_points(M: DilationMatrix, tau, k: int, alphas) -> list[tuple[float, ...]]:
    """Grid attachment t^[k]_alpha = M^{-k}(alpha + tau)."""
    t = as_tau(tau, M.s)
    Mk = M.inv_power(k)
    out = []
    for alpha in alphas:
        shifted = np.array([float(a) + tv for a, tv in zip(alpha, t)])
        out.append(tuple(float(x) for x in Mk @ shifted))
    return out
