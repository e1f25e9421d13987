"""Algebraic reproduction and generation checks for subdivision schemes.

A scheme generates the space spanned by x^gamma exp(lambda . x) when all
derivatives D^gamma a^[k] vanish on the twisted points V'_k.  It reproduces
the space when additionally, for some real shift parameter tau,

    v^gamma D^gamma a^[k](v) = m * v^(M tau - tau) * q_gamma(M tau - tau)

at the points with the all-ones dual component.  Both sides are evaluated in
weighted falling-factorial form, which is equivalent to the plain-derivative
statement because the gamma set is kept downward closed.

Non-singularity of the scheme is an assumption of these characterizations;
reports carry it as a flag, it is never verified here.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .engine import (
    EngineError,
    apply_operator,
    exp_poly_value,
    sample_exp_poly,
    valid_interior,
)
from .lattice import DilationMatrix, as_complex_vector, as_tau, q_eval
from .symbols import ExpPolySpace, SchemeSpec

__all__ = [
    "DEFAULT_TOL",
    "CheckError",
    "NoAdmissibleTauError",
    "BranchAmbiguityError",
    "NormalizationError",
    "ConditionRecord",
    "ConditionReport",
    "StepwiseRecord",
    "StepwiseReport",
    "check_generation",
    "check_reproduction",
    "solve_tau",
    "normalize",
    "stepwise_test",
]

# Double precision with symbol sizes well below 1e3; relative residuals are
# used whenever |rhs| exceeds 1.
DEFAULT_TOL = 1e-9


class CheckError(ValueError):
    """Invalid checker input."""


class NoAdmissibleTauError(CheckError):
    """No real shift parameter satisfies the reproduction conditions."""


class BranchAmbiguityError(CheckError):
    """Logarithm branch is ambiguous at the probe level; increase k_probe."""


class NormalizationError(CheckError):
    """Symbol vanishes at the normalization anchor."""


@dataclass(frozen=True)
class ConditionRecord:
    kind: str
    k: int
    gamma: tuple[int, ...]
    lam: tuple[complex, ...]
    eps: tuple[complex, ...]
    v: tuple[complex, ...]
    lhs: complex
    rhs: complex
    residual: float

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "gamma": list(self.gamma),
            "lambda": [[z.real, z.imag] for z in self.lam],
            "eps": [[z.real, z.imag] for z in self.eps],
            "v": [[z.real, z.imag] for z in self.v],
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "residual": self.residual,
        }


@dataclass
class ConditionReport:
    mode: str
    scheme: str
    tol: float
    records: list[ConditionRecord]
    tau: tuple[float, ...] | None = None
    nonsingularity_assumed: bool = True

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)

    @property
    def verdict(self) -> bool:
        return all(r.residual <= self.tol for r in self.records)

    def failures(self) -> list[ConditionRecord]:
        return [r for r in self.records if r.residual > self.tol]

    def to_json_obj(self) -> dict:
        return {
            "mode": self.mode,
            "scheme": self.scheme,
            "tol": self.tol,
            "tau": None if self.tau is None else list(self.tau),
            "verdict": "pass" if self.verdict else "fail",
            "max_residual": self.max_residual,
            "nonsingularity_assumed": self.nonsingularity_assumed,
            "records": [r.to_json_obj() for r in self.records],
        }

    def table(self, max_rows: int = 40) -> str:
        lines = [
            f"{self.mode} check for {self.scheme}"
            + (f", tau={tuple(self.tau)}" if self.tau is not None else ""),
            f"{'k':>3} {'gamma':>10} {'lambda':>24} {'eps':>20} {'residual':>12} status",
        ]
        shown = self.records
        clipped = 0
        if len(shown) > max_rows:
            worst = sorted(shown, key=lambda r: -r.residual)[:max_rows]
            clipped = len(shown) - max_rows
            shown = sorted(worst, key=lambda r: (r.k, tuple((z.real, z.imag) for z in r.lam), r.gamma))
        for r in shown:
            lam = ",".join(_fmt_c(z) for z in r.lam)
            eps = ",".join(_fmt_c(z) for z in r.eps)
            ok = "ok" if r.residual <= self.tol else "FAIL"
            lines.append(
                f"{r.k:>3} {str(r.gamma):>10} {lam:>24} {eps:>20} {r.residual:>12.3e} {ok}"
            )
        if clipped:
            lines.append(f"... {clipped} more record(s) not shown")
        lines.append(
            f"verdict: {'pass' if self.verdict else 'fail'}"
            f" (max residual {self.max_residual:.3e}, tol {self.tol:.1e},"
            f" non-singularity assumed)"
        )
        return "\n".join(lines)


def _fmt_c(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.4g}"
    return f"{z.real:.3g}{z.imag:+.3g}i"


def _levels(k_range) -> list[int]:
    if isinstance(k_range, int):
        ks = [k_range]
    elif isinstance(k_range, tuple) and len(k_range) == 2 and all(isinstance(x, int) for x in k_range):
        ks = list(range(k_range[0], k_range[1] + 1))
    else:
        ks = [int(k) for k in k_range]
    if not ks or any(k < 0 for k in ks):
        raise CheckError("level range must be nonempty with nonnegative levels")
    return sorted(set(ks))


def _residual(lhs: complex, rhs: complex) -> float:
    err = abs(lhs - rhs)
    scale = abs(rhs)
    return err / scale if scale > 1.0 else err


def _freq_vector(lam, M: DilationMatrix, k: int) -> np.ndarray:
    """w = lambda^T M^{-(k+1)}, the exponent data of the evaluation point."""
    return np.array(lam, dtype=complex) @ M.inv_power(k + 1)


def _dual_iter(M: DilationMatrix):
    for i, eps in enumerate(M.dual_points()):
        yield eps, i == 0


def check_generation(scheme: SchemeSpec, space: ExpPolySpace, k_range, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Zero conditions: D^gamma a^[k] vanishes on V'_k for every pair in the space."""
    M = scheme.M
    if space.s != M.s:
        raise CheckError("space dimension does not match the scheme")
    records = []
    for k in _levels(k_range):
        a = scheme.symbol(k)
        for lam in space.lambdas():
            w = _freq_vector(lam, M, k)
            base = tuple(cmath.exp(-w[j]) for j in range(M.s))
            for gamma in space.gammas_for(lam):
                for eps, is_one in _dual_iter(M):
                    if is_one:
                        continue
                    v = tuple(e * b for e, b in zip(eps, base))
                    lhs = a.weighted_derivative(gamma, v)
                    records.append(
                        ConditionRecord(
                            kind="generation",
                            k=k,
                            gamma=gamma,
                            lam=lam,
                            eps=eps,
                            v=v,
                            lhs=lhs,
                            rhs=0j,
                            residual=_residual(lhs, 0j),
                        )
                    )
    return ConditionReport(mode="generation", scheme=scheme.name, tol=tol, records=records)


def check_reproduction(scheme: SchemeSpec, space: ExpPolySpace, tau, k_range, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Shifted reproduction conditions at every dual point.

    At the all-ones point the required value is m v^(M tau - tau)
    q_gamma(M tau - tau); elsewhere it is zero.  v^(M tau - tau) is formed
    from the defining exponents, so no logarithm branch is involved.
    """
    M = scheme.M
    if space.s != M.s:
        raise CheckError("space dimension does not match the scheme")
    t = as_tau(tau, M.s)
    x = tuple(
        float(sum(M.mat[i][j] * t[j] for j in range(M.s)) - t[i]) for i in range(M.s)
    )
    records = []
    for k in _levels(k_range):
        a = scheme.symbol(k)
        for lam in space.lambdas():
            w = _freq_vector(lam, M, k)
            base = tuple(cmath.exp(-w[j]) for j in range(M.s))
            v_pow_x = cmath.exp(-complex(sum(w[j] * x[j] for j in range(M.s))))
            for gamma in space.gammas_for(lam):
                rhs_one = M.m * v_pow_x * q_eval(gamma, x)
                for eps, is_one in _dual_iter(M):
                    v = tuple(e * b for e, b in zip(eps, base))
                    lhs = a.weighted_derivative(gamma, v)
                    rhs = rhs_one if is_one else 0j
                    records.append(
                        ConditionRecord(
                            kind="reproduction",
                            k=k,
                            gamma=gamma,
                            lam=lam,
                            eps=eps,
                            v=v,
                            lhs=lhs,
                            rhs=rhs,
                            residual=_residual(lhs, rhs),
                        )
                    )
    return ConditionReport(
        mode="reproduction", scheme=scheme.name, tol=tol, records=records, tau=t
    )


def _displacement_probe(scheme: SchemeSpec, space: ExpPolySpace, k: int, tol: float) -> np.ndarray:
    """Estimate x = M tau - tau from the level-k symbol.

    Polynomial route: with lambda = 0 and all first-order gammas available,
    x_l = D^(e_l) a(1) / m (requires a(1) = m).  Exponential route: from the
    gamma = 0 condition a(v) = m v^x, via first-derivative ratios when the
    space holds first-order gammas for a nonzero lambda, otherwise from
    principal logarithms of a(v)/m stacked over the available frequencies.
    """
    M = scheme.M
    s = M.s
    a = scheme.symbol(k)
    ones = (1.0 + 0j,) * s
    units = [tuple(int(i == j) for i in range(s)) for j in range(s)]

    zero_lam = (0j,) * s
    gammas0 = space.gammas_for(zero_lam)
    if gammas0 and all(u in gammas0 for u in units):
        a1 = a.eval(ones)
        if abs(a1 - M.m) > tol * M.m:
            raise NoAdmissibleTauError(
                f"a(1) = {a1:.12g} differs from m = {M.m}; polynomial route needs a(1) = m"
            )
        return np.array(
            [a.weighted_derivative(u, ones) / M.m for u in units], dtype=complex
        )

    nz_lams = [
        lam for lam in space.lambdas() if all(z != 0 for z in lam)
    ]
    if not nz_lams:
        raise CheckError(
            "solve_tau needs lambda = 0 with all first-order gammas, "
            "or a lambda with every component nonzero"
        )
    for lam in nz_lams:
        if all(u in space.gammas_for(lam) for u in units):
            w = _freq_vector(lam, M, k)
            v = tuple(cmath.exp(-w[j]) for j in range(s))
            av = a.eval(v)
            if abs(av) < 1e-14:
                raise NoAdmissibleTauError(f"a(v) vanishes at the probe point, level {k}")
            return np.array(
                [a.weighted_derivative(u, v) / av for u in units], dtype=complex
            )

    rows = []
    rhs = []
    for lam in nz_lams:
        w = _freq_vector(lam, M, k)
        if np.max(np.abs(w)) >= cmath.pi:
            raise BranchAmbiguityError(
                f"|lambda^T M^-(k+1)| reaches pi at probe level {k}; increase k_probe"
            )
        v = tuple(cmath.exp(-w[j]) for j in range(s))
        av = a.eval(v)
        if abs(av) < 1e-14:
            raise NoAdmissibleTauError(f"a(v) vanishes at the probe point, level {k}")
        val = -cmath.log(av / M.m)
        rows.append([w[j] for j in range(s)])
        rhs.append(val)
    A = np.vstack([np.real(rows), np.imag(rows)])
    b = np.concatenate([np.real(rhs), np.imag(rhs)])
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    return x.astype(complex)


def solve_tau(scheme: SchemeSpec, space: ExpPolySpace, k_probe: int = 0, tol: float = DEFAULT_TOL) -> tuple[float, ...]:
    """Solve for the shift parameter tau, probing two consecutive levels.

    The displacement x = M tau - tau is estimated at k_probe and k_probe + 1;
    the two estimates must agree, tau = (M - I)^{-1} x must be real, and the
    resulting reproduction conditions must hold at the probe levels.
    """
    if k_probe < 0:
        raise CheckError("probe level must be nonnegative")
    M = scheme.M
    xs = [
        _displacement_probe(scheme, space, k, tol) for k in (k_probe, k_probe + 1)
    ]
    if np.max(np.abs(xs[0] - xs[1])) > max(tol, 1e-12):
        raise NoAdmissibleTauError(
            "no admissible tau: displacement estimates disagree across probe levels"
        )
    x = xs[0]
    if np.max(np.abs(np.imag(x))) > max(tol, 1e-12):
        raise NoAdmissibleTauError("no admissible tau: shift parameter is not real")
    A = np.array(M.mat, dtype=float) - np.eye(M.s)
    tau = tuple(float(v) for v in np.linalg.solve(A, np.real(x)))
    report = check_reproduction(scheme, space, tau, (k_probe, k_probe + 1), tol)
    if not report.verdict:
        raise NoAdmissibleTauError(
            f"no admissible tau: candidate {tau} leaves residual {report.max_residual:.3e}"
        )
    return tau


def normalize(scheme: SchemeSpec, anchor_lambda, tau) -> SchemeSpec:
    """Rescale each level so the gamma = 0 condition holds at the anchor.

    K^[k] = m v^(M tau - tau) / a^[k](v) with v built from anchor_lambda at
    the all-ones dual point.  Raises when some a^[k](v) vanishes.
    """
    M = scheme.M
    lam = as_complex_vector(anchor_lambda, M.s)
    t = as_tau(tau, M.s)
    x = tuple(
        float(sum(M.mat[i][j] * t[j] for j in range(M.s)) - t[i]) for i in range(M.s)
    )

    def factor(k: int) -> complex:
        w = _freq_vector(lam, M, k)
        v = tuple(cmath.exp(-w[j]) for j in range(M.s))
        av = scheme.symbol(k).eval(v)
        if av == 0:
            raise NormalizationError(
                f"symbol at level {k} vanishes at the normalization anchor"
            )
        return M.m * cmath.exp(-complex(sum(w[j] * x[j] for j in range(M.s)))) / av

    return scheme.scaled(factor, suffix="normalized", tau=t)


@dataclass(frozen=True)
class StepwiseRecord:
    gamma: tuple[int, ...]
    lam: tuple[complex, ...]
    max_err: float
    points: int

    def to_json_obj(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "lambda": [[z.real, z.imag] for z in self.lam],
            "max_err": self.max_err,
            "points": self.points,
        }


@dataclass
class StepwiseReport:
    scheme: str
    k: int
    tol: float
    tau: tuple[float, ...]
    records: list[StepwiseRecord] = field(default_factory=list)

    @property
    def max_err(self) -> float:
        return max((r.max_err for r in self.records), default=0.0)

    @property
    def verdict(self) -> bool:
        return all(r.max_err <= self.tol for r in self.records)

    def to_json_obj(self) -> dict:
        return {
            "mode": "stepwise",
            "scheme": self.scheme,
            "k": self.k,
            "tau": list(self.tau),
            "tol": self.tol,
            "verdict": "pass" if self.verdict else "fail",
            "max_err": self.max_err,
            "records": [r.to_json_obj() for r in self.records],
        }

    def table(self) -> str:
        lines = [
            f"stepwise check for {self.scheme} at level {self.k}, tau={tuple(self.tau)}",
            f"{'gamma':>10} {'lambda':>24} {'points':>7} {'max err':>12} status",
        ]
        for r in self.records:
            lam = ",".join(_fmt_c(z) for z in r.lam)
            ok = "ok" if r.max_err <= self.tol else "FAIL"
            lines.append(f"{str(r.gamma):>10} {lam:>24} {r.points:>7} {r.max_err:>12.3e} {ok}")
        lines.append(
            f"verdict: {'pass' if self.verdict else 'fail'} (max err {self.max_err:.3e}, tol {self.tol:.1e})"
        )
        return "\n".join(lines)


def stepwise_test(scheme: SchemeSpec, space: ExpPolySpace, tau, k: int, window, tol: float = DEFAULT_TOL) -> StepwiseReport:
    """One refinement step on exact samples versus next-level exact samples.

    Each basis function of the space is sampled on the window at level k,
    refined once with a^[k], and compared on the valid interior against its
    own samples at level k + 1.
    """
    M = scheme.M
    if space.s != M.s:
        raise CheckError("space dimension does not match the scheme")
    t = as_tau(tau, M.s)
    a = scheme.symbol(k)
    valid = valid_interior(a, M, window)
    if not valid:
        raise EngineError("empty valid interior; enlarge the window")
    Mk1 = M.inv_power(k + 1)
    report = StepwiseReport(scheme=scheme.name, k=k, tol=tol, tau=t)
    for gamma, lam in space.pairs:
        f = sample_exp_poly(gamma, lam, M, t, k, window)
        g = apply_operator(a, M, f)
        worst = 0.0
        for alpha in valid:
            shifted = [float(x) + tv for x, tv in zip(alpha, t)]
            pt = tuple(
                float(sum(Mk1[i][j] * shifted[j] for j in range(M.s)))
                for i in range(M.s)
            )
            want = exp_poly_value(gamma, lam, pt)
            worst = max(worst, abs(g.values[alpha] - want))
        report.records.append(
            StepwiseRecord(gamma=gamma, lam=lam, max_err=worst, points=len(valid))
        )
    return report
