"""Golden-ratio constants and the route-size ratio chains of the relaxed problem.

Two recursions for the consecutive ratios ``nu[l] = n_{k-l} / n_{k-l+1}``
are provided:

``"tabulated"``
    The closed-form pattern behind the reference ratio table, in which the
    tail term of the quadratic is the sum of ``n_k / n_{k-i}`` over the last
    ``l-1`` routes.
    This is the chain behind the tabulated first-route fractions
    (0.872678, 0.866352, ..., limit 0.867040).

``"stationary"``
    The ratio obtained by equating the stationarity expression of two
    adjacent routes exactly, where the tail term is
    ``sum_{j > k-l+1} n_j / n_{k-l+1}``.  Both chains agree for ``k <= 3``;
    from ``k = 4`` on only this one yields an exact KKT point, and its
    first-route fraction tends to ``sqrt(3)/2``.

Both chains depend on the distance ``l`` from the last route only, so a single
chain of length :data:`MAX_ROUTES` is computed once per recursion and sliced.

Successive first-route fractions differ by roughly ``0.133**k``, which is
below double-precision resolution beyond ``k ~ 20``.  :func:`eta1_decimal`
runs the same recursion in ``decimal`` arithmetic for questions about the
ordering of far-out terms.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "GOLDEN",
    "MAX_ROUTES",
    "RECURSIONS",
    "ConvergenceError",
    "GoldenConstants",
    "RatioTable",
    "eta1",
    "eta1_decimal",
    "eta1_limit",
    "nu_chain",
]

MAX_ROUTES = 64
RECURSIONS = ("tabulated", "stationary")


class ConvergenceError(RuntimeError):
    """Raised when the first-route fraction has not settled by MAX_ROUTES."""


@dataclass(frozen=True)
class GoldenConstants:
    phi: float
    one_plus_phi_sq: float
    two_minus_phi: float


_PHI = (1.0 + math.sqrt(5.0)) / 2.0
GOLDEN = GoldenConstants(
    phi=_PHI,
    one_plus_phi_sq=(1.0 + _PHI) ** 2,
    two_minus_phi=2.0 - _PHI,
)


@dataclass(frozen=True)
class RatioTable:
    """Ratios of the ``k``-route relaxed optimum.

    ``nu`` is ordered from the tail: ``nu[0] = n_{k-1}/n_k``, ...,
    ``nu[k-2] = n_1/n_2``.  ``rho_hat[i-1]`` is ``n_{k-i+1} / n_1``, so the
    route sizes are ``n_1 * (1, rho_hat[k-2], ..., rho_hat[0])``.
    """

    k: int
    nu: tuple[float, ...]
    rho_hat: tuple[float, ...]
    eta1: float
    recursion: str = "tabulated"

    def nu_at(self, i: int) -> float:
        """Ratio ``n_i / n_{i+1}`` for route index ``1 <= i <= k-1``."""
        if not 1 <= i <= self.k - 1:
            raise IndexError(f"route index {i} outside 1..{self.k - 1}")
        return self.nu[self.k - 1 - i]

    def fractions(self) -> tuple[float, ...]:
        """Share of all individuals carried by each route, first route first."""
        return (self.eta1,) + tuple(r * self.eta1 for r in reversed(self.rho_hat))


def _larger_root(s: float) -> float:
    # x^2 - (3+s) x + (1+s) = 0; the discriminant is s^2 + 2s + 5 > 0 and
    # both terms of the larger root are positive, so no cancellation occurs.
    b = 3.0 + s
    return 0.5 * (b + math.sqrt(b * b - 4.0 * (1.0 + s)))


@lru_cache(maxsize=None)
def _tail_chain(recursion: str) -> tuple[float, ...]:
    """``mu[l-1] = nu^k_{k-l}`` for ``l = 1 .. MAX_ROUTES-1``."""
    mus: list[float] = []
    if recursion == "tabulated":
        s = 0.0
        inv_prod = 1.0
        for _ in range(MAX_ROUTES - 1):
            x = _larger_root(s)
            mu = x * x
            mus.append(mu)
            inv_prod /= mu
            s += inv_prod
    elif recursion == "stationary":
        sigma = 0.0
        for _ in range(MAX_ROUTES - 1):
            x = _larger_root(sigma)
            mu = x * x
            mus.append(mu)
            sigma = (sigma + 1.0) / mu
    else:
        raise ValueError(f"unknown recursion {recursion!r}; expected one of {RECURSIONS}")
    return tuple(mus)


def _check_k(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int):
        raise TypeError(f"k must be an integer, got {type(k).__name__}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > MAX_ROUTES:
        raise ValueError(f"k must be <= {MAX_ROUTES}, got {k}")


def nu_chain(k: int, recursion: str = "tabulated") -> RatioTable:
    """Ratio chain, cumulative products and first-route fraction for ``k`` routes."""
    _check_k(k)
    mus = _tail_chain(recursion)[: k - 1]
    # rho_hat_i = prod_{j=1}^{k-i} 1/nu_j with nu_j = mus[k-1-j]; running
    # product from i = k-1 downwards.
    rho_hat = [0.0] * (k - 1)
    acc = 1.0
    for i in range(k - 1, 0, -1):
        acc /= mus[i - 1]
        rho_hat[i - 1] = acc
    eta = 1.0 / (1.0 + math.fsum(rho_hat))
    return RatioTable(k=k, nu=tuple(mus), rho_hat=tuple(rho_hat), eta1=eta, recursion=recursion)


def eta1(k: int, recursion: str = "tabulated") -> float:
    """Fraction of all individuals on the first route of the ``k``-route optimum."""
    return nu_chain(k, recursion).eta1


def eta1_limit(tol: float = 1e-6, recursion: str = "tabulated") -> float:
    """First ``eta1(k+1)`` whose step from ``eta1(k)`` is below ``tol``."""
    if not 1e-15 < tol <= 1e-3:
        raise ValueError(f"tol must lie in (1e-15, 1e-3], got {tol}")
    prev = eta1(2, recursion)
    for k in range(3, MAX_ROUTES + 1):
        cur = eta1(k, recursion)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise ConvergenceError(f"eta1 did not settle to {tol} by k={MAX_ROUTES}")


@lru_cache(maxsize=None)
def _inverse_chain_decimal(recursion: str, digits: int) -> tuple[decimal.Decimal, ...]:
    """``1 / mu[l-1]`` of :func:`_tail_chain`, exact to ``digits`` digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        one, three, four = decimal.Decimal(1), decimal.Decimal(3), decimal.Decimal(4)
        inv = []
        s = decimal.Decimal(0)
        inv_prod = one
        for _ in range(MAX_ROUTES - 1):
            b = three + s
            x = (b + (b * b - four * (one + s)).sqrt()) / 2
            r = one / (x * x)
            inv.append(r)
            if recursion == "tabulated":
                inv_prod *= r
                s += inv_prod
            elif recursion == "stationary":
                s = (s + one) * r
            else:
                raise ValueError(f"unknown recursion {recursion!r}; expected one of {RECURSIONS}")
        return tuple(inv)


def eta1_decimal(k: int, recursion: str = "tabulated", digits: int = 50) -> decimal.Decimal:
    """``eta1(k)`` carried to ``digits`` significant digits."""
    _check_k(k)
    if not 17 <= digits <= 1000:
        raise ValueError(f"digits must lie in 17..1000, got {digits}")
    inv = _inverse_chain_decimal(recursion, digits)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        one = decimal.Decimal(1)
        # 1 + sum(rho_hat) = 1 + r_1 (1 + r_2 (1 + ... (1 + r_{k-1})))
        # with r_j = 1/nu_j = inv[k-1-j]; evaluated from the innermost term.
        total = one
        for l in range(k - 1):
            total = one + inv[l] * total
        return one / total
