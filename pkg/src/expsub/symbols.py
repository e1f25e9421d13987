"""Sparse Laurent polynomial symbols and scheme/space containers.

A mask at refinement level k is stored through its symbol, the Laurent
polynomial a(z) = sum_alpha a_alpha z^alpha with finitely many complex
coefficients.  Derivative conditions are evaluated in weighted
falling-factorial form, z^gamma D^gamma a(z) = sum_alpha a_alpha
q_gamma(alpha) z^alpha, which is exact for Laurent polynomials.

All values are immutable once built; operations are pure.
"""

from __future__ import annotations

import warnings
from itertools import product
from typing import Callable, Iterable, Mapping

from .lattice import (
    DilationMatrix,
    as_complex_vector,
    as_multi_index,
    as_tau,
)

__all__ = [
    "SymbolError",
    "SymbolDomainError",
    "LaurentSymbol",
    "SchemeSpec",
    "ExpPolySpace",
]


class SymbolError(ValueError):
    """Malformed symbol construction or mismatched dimensions."""


class SymbolDomainError(SymbolError):
    """Evaluation outside the domain (C \\ {0})^s."""


def _falling(a: int, g: int) -> int:
    """Integer falling factorial a (a-1) ... (a-g+1)."""
    out = 1
    for j in range(g):
        out *= a - j
    return out


class LaurentSymbol:
    """Finitely supported map from integer exponent vectors to complex coefficients.

    Coefficients that are exactly zero are pruned; near-zero terms are kept so
    that condition residuals stay honest.
    """

    __slots__ = ("s", "_terms")

    def __init__(self, s: int, terms: Mapping | None = None):
        s = int(s)
        if s < 1:
            raise SymbolError("dimension must be positive")
        object.__setattr__(self, "s", s)
        clean: dict[tuple[int, ...], complex] = {}
        for exp, c in (terms or {}).items():
            if isinstance(exp, int):
                exp = (exp,)
            e = tuple(int(x) for x in exp)
            if len(e) != s:
                raise SymbolError(f"exponent {e} has length {len(e)}, expected {s}")
            c = complex(c)
            if c != 0:
                clean[e] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSymbol is immutable")

    # -- construction helpers ---------------------------------------------------

    @classmethod
    def zero(cls, s: int) -> "LaurentSymbol":
        return cls(s, {})

    @classmethod
    def one(cls, s: int) -> "LaurentSymbol":
        return cls(s, {(0,) * s: 1.0})

    @classmethod
    def monomial(cls, exp, coeff=1.0) -> "LaurentSymbol":
        if isinstance(exp, int):
            exp = (exp,)
        return cls(len(exp), {tuple(exp): coeff})

    # -- inspection ---------------------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], complex]:
        return dict(self._terms)

    def coeff(self, exp) -> complex:
        if isinstance(exp, int):
            exp = (exp,)
        return self._terms.get(tuple(int(x) for x in exp), 0j)

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self._terms)

    def sorted_items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSymbol)
            and self.s == other.s
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.s, frozenset(self._terms.items())))

    def __repr__(self):
        pieces = [f"{c!r}*z^{e}" for e, c in self.sorted_items()]
        return f"LaurentSymbol(s={self.s}, {' + '.join(pieces) or '0'})"

    def max_diff(self, other: "LaurentSymbol") -> float:
        """Largest absolute coefficient difference."""
        if self.s != other.s:
            raise SymbolError("dimension mismatch")
        keys = set(self._terms) | set(other._terms)
        return max(
            (abs(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys),
            default=0.0,
        )

    # -- ring operations ----------------------------------------------------------

    def _check_peer(self, other):
        if not isinstance(other, LaurentSymbol):
            raise TypeError("expected a LaurentSymbol")
        if self.s != other.s:
            raise SymbolError("dimension mismatch")

    def __add__(self, other):
        self._check_peer(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentSymbol(self.s, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentSymbol(
                self.s, {e: c * other for e, c in self._terms.items()}
            )
        self._check_peer(other)
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentSymbol(self.s, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise SymbolError("exponent must be a nonnegative integer")
        out = LaurentSymbol.one(self.s)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, beta) -> "LaurentSymbol":
        """Multiply by z^beta, translating every exponent."""
        if isinstance(beta, int):
            beta = (beta,)
        b = tuple(int(x) for x in beta)
        if len(b) != self.s:
            raise SymbolError("shift vector has wrong length")
        return LaurentSymbol(
            self.s,
            {tuple(e + d for e, d in zip(exp, b)): c for exp, c in self._terms.items()},
        )

    # -- analysis -------------------------------------------------------------------

    def eval(self, z) -> complex:
        """a(z) = sum a_alpha z^alpha; negative exponents via reciprocals."""
        zz = as_complex_vector(z, self.s)
        if any(c == 0 for c in zz):
            raise SymbolDomainError("symbol evaluation requires nonzero components")
        total = 0j
        for exp, c in self.sorted_items():
            term = c
            for zj, ej in zip(zz, exp):
                term *= zj**ej
            total += term
        return total

    def weighted_derivative(self, gamma, z) -> complex:
        """z^gamma D^gamma a(z) = sum a_alpha q_gamma(alpha) z^alpha.

        The falling-factorial weights are exact integers, so this avoids
        differentiating through negative exponents symbolically.
        """
        g = as_multi_index(gamma, self.s)
        zz = as_complex_vector(z, self.s)
        if any(c == 0 for c in zz):
            raise SymbolDomainError("symbol evaluation requires nonzero components")
        total = 0j
        for exp, c in self.sorted_items():
            w = 1
            for a, gl in zip(exp, g):
                w *= _falling(a, gl)
                if w == 0:
                    break
            if w == 0:
                continue
            term = c * w
            for zj, ej in zip(zz, exp):
                term *= zj**ej
            total += term
        return total

    def partial_derivative(self, gamma) -> "LaurentSymbol":
        """The mixed partial D^gamma a as a new symbol."""
        g = as_multi_index(gamma, self.s)
        out: dict[tuple[int, ...], complex] = {}
        for exp, c in self._terms.items():
            w = 1
            for a, gl in zip(exp, g):
                w *= _falling(a, gl)
                if w == 0:
                    break
            if w == 0:
                continue
            e = tuple(a - gl for a, gl in zip(exp, g))
            out[e] = out.get(e, 0) + c * w
        return LaurentSymbol(self.s, out)

    def sub_symbol(self, eps, M: DilationMatrix) -> "LaurentSymbol":
        """Restriction to the coset eps + M Z^s (exponents kept in place)."""
        if isinstance(eps, int):
            eps = (eps,)
        if M.s != self.s:
            raise SymbolError("dimension mismatch with dilation matrix")
        target = M.coset_of(eps)
        return LaurentSymbol(
            self.s,
            {e: c for e, c in self._terms.items() if M.coset_of(e) == target},
        )

    # -- serialization -----------------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        return [
            {"exp": list(e), "re": c.real, "im": c.imag}
            for e, c in self.sorted_items()
        ]

    @classmethod
    def from_json_obj(cls, obj, s: int | None = None) -> "LaurentSymbol":
        terms = {}
        for rec in obj:
            e = tuple(int(x) for x in rec["exp"])
            terms[e] = complex(float(rec["re"]), float(rec.get("im", 0.0)))
            if s is None:
                s = len(e)
        if s is None:
            raise SymbolError("cannot infer dimension of an empty symbol")
        return cls(s, terms)


class SchemeSpec:
    """Level-indexed family of masks k -> a^[k] over one dilation matrix.

    `rule` maps a level to a LaurentSymbol; results are cached.  `tau` is the
    documented shift parameter, `space` the documented reproduction space.
    """

    def __init__(
        self,
        name: str,
        M: DilationMatrix,
        rule: Callable[[int], LaurentSymbol],
        tau=None,
        space: "ExpPolySpace | None" = None,
    ):
        self.name = str(name)
        self.M = M
        self._rule = rule
        self.tau = None if tau is None else as_tau(tau, M.s)
        self.space = space
        self._cache: dict[int, LaurentSymbol] = {}

    def symbol(self, k: int) -> LaurentSymbol:
        if not isinstance(k, int) or k < 0:
            raise SymbolError("level must be a nonnegative integer")
        sym = self._cache.get(k)
        if sym is None:
            sym = self._rule(k)
            if not isinstance(sym, LaurentSymbol) or sym.s != self.M.s:
                raise SymbolError(f"rule for level {k} returned a bad symbol")
            self._cache[k] = sym
        return sym

    @classmethod
    def stationary(cls, name, M, sym: LaurentSymbol, tau=None, space=None):
        return cls(name, M, lambda k: sym, tau=tau, space=space)

    @classmethod
    def from_levels(cls, name, M, levels, tail: LaurentSymbol, tau=None, space=None):
        """Explicit per-level symbols with a stationary tail beyond the list."""
        lv = list(levels)

        def rule(k):
            return lv[k] if k < len(lv) else tail

        return cls(name, M, rule, tau=tau, space=space)

    def scaled(self, factor: Callable[[int], complex], suffix="scaled", tau=None, space=None):
        """Per-level rescaling k -> factor(k) * a^[k]."""
        return SchemeSpec(
            f"{self.name}:{suffix}",
            self.M,
            lambda k: self.symbol(k) * factor(k),
            tau=self.tau if tau is None else tau,
            space=self.space if space is None else space,
        )

    def shifted(self, beta, tau=None):
        """Symbols z^beta * a^[k]; reproduction shifts move tau accordingly."""
        return SchemeSpec(
            f"{self.name}:shift{tuple(beta) if not isinstance(beta, int) else (beta,)}",
            self.M,
            lambda k: self.symbol(k).shift(beta),
            tau=tau,
            space=self.space,
        )

    def with_tau(self, tau):
        return SchemeSpec(self.name, self.M, self.symbol, tau=tau, space=self.space)


def _lambda_key(lam: tuple[complex, ...]):
    return tuple((z.real, z.imag) for z in lam)


class ExpPolySpace:
    """A finite set Q of (gamma, lambda) pairs spanning x^gamma exp(lambda . x).

    The gamma set is completed downward per lambda (with a warning) because
    the derivative conditions for gamma involve all smaller multi-indices.
    """

    def __init__(self, pairs: Iterable):
        norm: set[tuple[tuple[int, ...], tuple[complex, ...]]] = set()
        s = None
        for gamma, lam in pairs:
            g = as_multi_index(gamma)
            lv = as_complex_vector(lam)
            if s is None:
                s = len(g)
            if len(g) != s or len(lv) != s:
                raise SymbolError("inconsistent dimensions in space pairs")
            norm.add((g, lv))
        if s is None:
            raise SymbolError("space needs at least one (gamma, lambda) pair")
        self.s = s
        closed = set(norm)
        for g, lv in norm:
            for smaller in product(*(range(x + 1) for x in g)):
                closed.add((tuple(smaller), lv))
        if closed != norm:
            warnings.warn(
                f"space was not downward closed; {len(closed) - len(norm)} pair(s) added",
                stacklevel=2,
            )
        self.pairs = tuple(
            sorted(closed, key=lambda p: (_lambda_key(p[1]), sum(p[0]), p[0]))
        )

    def lambdas(self) -> list[tuple[complex, ...]]:
        seen = []
        for _, lam in self.pairs:
            if lam not in seen:
                seen.append(lam)
        return seen

    def gammas_for(self, lam) -> list[tuple[int, ...]]:
        lv = as_complex_vector(lam, self.s)
        return [g for g, l in self.pairs if l == lv]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __eq__(self, other):
        return isinstance(other, ExpPolySpace) and self.pairs == other.pairs

    @classmethod
    def polynomials(cls, s: int, max_degree: int) -> "ExpPolySpace":
        """All x^gamma with |gamma| <= max_degree (lambda = 0)."""
        zero = (0.0,) * s
        pairs = [
            (g, zero)
            for g in product(range(max_degree + 1), repeat=s)
            if sum(g) <= max_degree
        ]
        return cls(pairs)

    @classmethod
    def exponentials(cls, lambdas, s: int | None = None) -> "ExpPolySpace":
        """Pure exponentials exp(lambda . x), gamma = 0."""
        lams = [as_complex_vector(l, s) for l in lambdas]
        if s is None:
            s = len(lams[0])
        return cls([((0,) * s, l) for l in lams])

    @classmethod
    def span(cls, gammas, lambdas) -> "ExpPolySpace":
        gs = [as_multi_index(g) for g in gammas]
        ls = [as_complex_vector(l) for l in lambdas]
        return cls([(g, l) for g in gs for l in ls])

    def to_json_obj(self):
        return {
            "pairs": [
                {"gamma": list(g), "lambda": [[z.real, z.imag] for z in lam]}
                for g, lam in self.pairs
            ]
        }
