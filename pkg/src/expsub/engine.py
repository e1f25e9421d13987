"""Subdivision operators on lattice data.

Applies masks to finitely supported grid data, runs multi-level refinement,
samples exponential polynomials on shifted grids, and collects basic limit
function samples.  Output values are accumulated in a fixed order (sorted
input index), so results are reproducible bit for bit.
"""

from __future__ import annotations

import cmath
import csv

from .lattice import DilationMatrix, as_complex_vector, as_multi_index, as_tau
from .symbols import LaurentSymbol, SchemeSpec, SymbolError

__all__ = [
    "EngineError",
    "GridData",
    "apply_operator",
    "refine",
    "sample_exp_poly",
    "exp_poly_value",
    "basic_limit_samples",
    "is_interpolatory",
    "valid_interior",
    "box_indices",
    "grid_to_json_obj",
    "grid_from_json_obj",
    "grid_to_csv",
    "grid_from_csv",
]


class EngineError(ValueError):
    """Bad grid data or incompatible operator application."""


class GridData:
    """Finitely supported complex data on Z^s, tagged with level and shift.

    The level tag exists so masks from one refinement level are not silently
    applied to data living on another.
    """

    def __init__(self, s: int, level: int, values, tau=None):
        self.s = int(s)
        if self.s < 1:
            raise EngineError("dimension must be positive")
        if level < 0:
            raise EngineError("level must be nonnegative")
        self.level = int(level)
        self.tau = as_tau(tau if tau is not None else (0.0,) * self.s, self.s)
        vals: dict[tuple[int, ...], complex] = {}
        for idx, v in dict(values).items():
            if isinstance(idx, int):
                idx = (idx,)
            key = tuple(int(x) for x in idx)
            if len(key) != self.s:
                raise EngineError(f"index {key} has length {len(key)}, expected {self.s}")
            vals[key] = complex(v)
        self.values = vals

    @classmethod
    def delta(cls, s: int, level: int = 0, tau=None) -> "GridData":
        return cls(s, level, {(0,) * s: 1.0}, tau=tau)

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.values)

    def __len__(self):
        return len(self.values)


def box_indices(window, s: int) -> list[tuple[int, ...]]:
    """Expand a window spec into a sorted list of lattice indices.

    Accepts an int radius R (the box [-R, R]^s), a (lo, hi) pair applied to
    every axis, a per-axis list of (lo, hi) pairs, or an explicit iterable of
    index tuples.
    """
    if isinstance(window, int):
        ranges = [(-window, window)] * s
    elif (
        isinstance(window, (tuple, list))
        and len(window) == 2
        and all(isinstance(x, int) for x in window)
    ):
        ranges = [tuple(window)] * s
    elif isinstance(window, (tuple, list)) and window and isinstance(window[0], (tuple, list)) and len(window[0]) == 2 and all(isinstance(x, int) for x in window[0]):
        if len(window) != s:
            raise EngineError("per-axis window must give one (lo, hi) pair per axis")
        ranges = [tuple(r) for r in window]
    else:
        out = set()
        for idx in window:
            if isinstance(idx, int):
                idx = (idx,)
            key = tuple(int(x) for x in idx)
            if len(key) != s:
                raise EngineError("window index of wrong dimension")
            out.add(key)
        return sorted(out)
    for lo, hi in ranges:
        if lo > hi:
            raise EngineError("empty window range")
    idxs = [()]
    for lo, hi in ranges:
        idxs = [t + (i,) for t in idxs for i in range(lo, hi + 1)]
    return idxs


def apply_operator(mask: LaurentSymbol, M: DilationMatrix, f: GridData) -> GridData:
    """One subdivision step: output_alpha = sum_beta mask_(alpha - M beta) f_beta.

    The output support is supp(mask) + M supp(f); contributions at each output
    point are summed in increasing beta order.
    """
    if mask.s != f.s or M.s != f.s:
        raise EngineError("dimension mismatch between mask, matrix and data")
    msupp = mask.support()
    mterms = mask.terms()
    out_support = set()
    for beta in f.values:
        mb = M.apply(beta)
        for mu in msupp:
            out_support.add(tuple(a + b for a, b in zip(mb, mu)))
    out: dict[tuple[int, ...], complex] = {}
    if f.s == 1:
        # same gather, with the divisibility test inlined; beta stays ascending
        det = M.mat[0][0]
        pairs = sorted((mu[0], c) for mu, c in mterms.items())
        if det > 0:
            pairs.reverse()
        fv = f.values
        for alpha in sorted(out_support):
            a0 = alpha[0]
            acc = 0j
            for mu, c in pairs:
                r = a0 - mu
                if r % det == 0:
                    fb = fv.get((r // det,))
                    if fb is not None:
                        acc += c * fb
            out[alpha] = acc
        return GridData(1, f.level + 1, out, tau=f.tau)
    for alpha in sorted(out_support):
        contribs = []
        for mu in msupp:
            beta = M.solve_integer(tuple(a - u for a, u in zip(alpha, mu)))
            if beta is not None and beta in f.values:
                contribs.append((beta, mterms[mu]))
        contribs.sort(key=lambda t: t[0])
        acc = 0j
        for beta, c in contribs:
            acc += c * f.values[beta]
        out[alpha] = acc
    return GridData(f.s, f.level + 1, out, tau=f.tau)


def refine(scheme: SchemeSpec, f0: GridData, rounds: int, start_level: int | None = None) -> GridData:
    """Compose masks a^[l], a^[l+1], ..., a^[l+rounds-1] on f0."""
    if rounds < 0:
        raise EngineError("rounds must be nonnegative")
    lvl = f0.level if start_level is None else int(start_level)
    if lvl < 0:
        raise EngineError("start level must be nonnegative")
    g = f0
    for i in range(rounds):
        g = apply_operator(scheme.symbol(lvl + i), scheme.M, g)
    return g


def exp_poly_value(gamma, lam, t) -> complex:
    """x^gamma exp(lambda . x) at the real point t (0^0 = 1)."""
    p = 1.0
    for tl, gl in zip(t, gamma):
        p *= tl**gl
    return p * cmath.exp(sum(l * tl for l, tl in zip(lam, t)))


def sample_exp_poly(gamma, lam, M: DilationMatrix, tau, level: int, window) -> GridData:
    """Samples of x^gamma exp(lambda . x) at t = M^{-level}(alpha + tau)."""
    g = as_multi_index(gamma, M.s)
    lv = as_complex_vector(lam, M.s)
    t0 = as_tau(tau, M.s)
    if level < 0:
        raise EngineError("level must be nonnegative")
    Mk = M.inv_power(level)
    vals = {}
    for alpha in box_indices(window, M.s):
        shifted = [float(a) + tv for a, tv in zip(alpha, t0)]
        t = tuple(float(sum(Mk[i][j] * shifted[j] for j in range(M.s))) for i in range(M.s))
        vals[alpha] = exp_poly_value(g, lv, t)
    return GridData(M.s, level, vals, tau=t0)


def basic_limit_samples(scheme: SchemeSpec, rounds: int, start_level: int = 0):
    """Refine the delta sequence and attach values to their parameter points.

    Returns a list of (t, value) pairs with t = M^{-(start_level+rounds)}
    (alpha + tau), sorted by index.  tau comes from the scheme (default 0).
    """
    if rounds < 1:
        raise EngineError("need at least one refinement round")
    tau = scheme.tau if scheme.tau is not None else (0.0,) * scheme.M.s
    f = GridData.delta(scheme.M.s, level=start_level, tau=tau)
    g = refine(scheme, f, rounds, start_level=start_level)
    Mk = scheme.M.inv_power(g.level)
    out = []
    for alpha in g.support():
        shifted = [float(a) + tv for a, tv in zip(alpha, tau)]
        t = tuple(float(sum(Mk[i][j] * shifted[j] for j in range(scheme.M.s))) for i in range(scheme.M.s))
        out.append((t, g.values[alpha]))
    return out


def is_interpolatory(mask: LaurentSymbol, M: DilationMatrix) -> bool:
    """Exact test for mask_(M alpha) = delta_(alpha,0)."""
    if mask.s != M.s:
        raise SymbolError("dimension mismatch")
    zero = (0,) * M.s
    if mask.coeff(zero) != 1:
        return False
    for e in mask.support():
        if e != zero and M.solve_integer(e) is not None:
            return False
    return True


def valid_interior(mask: LaurentSymbol, M: DilationMatrix, window) -> list[tuple[int, ...]]:
    """Output indices whose whole stencil lies inside the input window.

    At these indices one subdivision step of data known only on the window
    agrees with the step applied to data known on all of Z^s.
    """
    win = set(box_indices(window, M.s))
    msupp = mask.support()
    candidates = set()
    for beta in win:
        mb = M.apply(beta)
        for mu in msupp:
            candidates.add(tuple(a + b for a, b in zip(mb, mu)))
    out = []
    for alpha in sorted(candidates):
        ok = True
        for mu in msupp:
            beta = M.solve_integer(tuple(a - u for a, u in zip(alpha, mu)))
            if beta is not None and beta not in win:
                ok = False
                break
        if ok:
            out.append(alpha)
    return out


# -- serialization ---------------------------------------------------------------


def grid_to_json_obj(g: GridData) -> dict:
    return {
        "level": g.level,
        "tau": list(g.tau),
        "values": [
            {"idx": list(i), "re": v.real, "im": v.imag}
            for i, v in sorted(g.values.items())
        ],
    }


def grid_from_json_obj(obj: dict, s: int | None = None) -> GridData:
    values = {}
    for rec in obj["values"]:
        idx = tuple(int(x) for x in rec["idx"])
        values[idx] = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        if s is None:
            s = len(idx)
    if s is None:
        raise EngineError("cannot infer dimension of empty grid data")
    return GridData(s, int(obj["level"]), values, tau=obj.get("tau"))


def grid_to_csv(g: GridData, fh) -> None:
    w = csv.writer(fh)
    w.writerow([f"idx{i}" for i in range(g.s)] + ["re", "im"])
    for idx, v in sorted(g.values.items()):
        w.writerow([*idx, repr(v.real), repr(v.imag)])


def grid_from_csv(fh, level: int = 0, tau=None) -> GridData:
    rows = list(csv.reader(fh))
    if not rows:
        raise EngineError("empty CSV")
    header = rows[0]
    s = sum(1 for h in header if h.startswith("idx"))
    if s == 0 or header[s] != "re":
        raise EngineError("CSV header must be idx0..idx{s-1},re,im")
    values = {}
    for row in rows[1:]:
        if not row:
            continue
        idx = tuple(int(x) for x in row[:s])
        values[idx] = complex(float(row[s]), float(row[s + 1]))
    return GridData(s, level, values, tau=tau)
