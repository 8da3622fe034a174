"""Shared generators and independent oracles for the test suite.

The quadrature oracles recompute expected values symbolically (sympy) or by
construction, never through the code paths under test.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from qdutch import (
    Book,
    ConditionalBet,
    DensityOperator,
    Measure,
    OutcomeSpace,
    Projector,
    Proposition,
    event_probability,
)

# --- classical random books -------------------------------------------------


def random_space(rng: random.Random, max_atoms: int = 6) -> OutcomeSpace:
    return OutcomeSpace([f"w{i}" for i in range(rng.randint(2, max_atoms))])


def random_joint(rng: random.Random, space: OutcomeSpace) -> list[Fraction]:
    """A strictly positive rational distribution over the atoms."""
    weights = [rng.randint(1, 9) for _ in space.atoms]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def random_proposition(
    rng: random.Random, space: OutcomeSpace, nonempty: bool = False
) -> Proposition:
    while True:
        members = frozenset(i for i in range(len(space)) if rng.random() < 0.5)
        if members or not nonempty:
            return Proposition(space, members)


def coherent_book(
    rng: random.Random,
    space: OutcomeSpace,
    joint: list[Fraction],
    n_bets: int,
) -> Book:
    """A book whose quotients all equal the joint's conditional probabilities."""
    bets = []
    for _ in range(n_bets):
        condition = random_proposition(rng, space, nonempty=True)
        target = random_proposition(rng, space)
        p_cond = event_probability(space, joint, condition)
        p_both = event_probability(space, joint, target & condition)
        stake = Fraction(rng.randint(-3, 3) or 1)
        bets.append(ConditionalBet(target, condition, p_both / p_cond, stake))
    return Book(space, bets)


def violating_book(
    rng: random.Random,
    space: OutcomeSpace,
    joint: list[Fraction],
    n_extra_bets: int,
) -> Book:
    """A pinned-down book with one axiom violation of magnitude >= 1/100.

    Outright bets on every atom pin the only consistent belief state to the
    joint itself; perturbing any single quotient then leaves no consistent
    assignment at all, so a Dutch book must exist.  The perturbation is
    scaled by 1/q(condition) so the multiplication-law residual
    q(target & condition) - q'(target|condition) q(condition) has magnitude
    at least 1/100.
    """
    base = coherent_book(rng, space, joint, n_extra_bets)
    pins = [
        ConditionalBet.outright(space.atom(name), joint[i])
        for i, name in enumerate(space.atoms)
    ]
    bets = list(base.bets) + pins
    index = rng.randrange(len(bets))
    bet = bets[index]
    residual = Fraction(rng.randint(1, 25), 100) * rng.choice((1, -1))
    p_cond = event_probability(space, joint, bet.condition)
    bets[index] = ConditionalBet(
        bet.target, bet.condition, bet.quotient + residual / p_cond, bet.stake
    )
    return Book(space, bets)


# --- quantum randomizers ------------------------------------------------------


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(ginibre)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_projector(
    rng: np.random.Generator, dim: int, rank: int | None = None
) -> Projector:
    u = haar_unitary(rng, dim)
    r = int(rng.integers(1, dim)) if rank is None else rank
    cols = u[:, :r]
    return Projector(cols @ cols.conj().T)


def random_density(rng: np.random.Generator, dim: int) -> DensityOperator:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def commuting_pair(
    rng: np.random.Generator, dim: int, orthogonal: bool = False
) -> tuple[Projector, Projector]:
    """Two projectors sharing an eigenbasis; optionally with disjoint support."""
    u = haar_unitary(rng, dim)
    labels = rng.integers(0, 3, size=dim)  # 0: P only, 1: Q only, 2: both/neither
    p_idx = labels == 0
    q_idx = labels == 1
    if not orthogonal:
        both = labels == 2
        p_idx = p_idx | both
        q_idx = q_idx | both
    p_cols = u[:, p_idx]
    q_cols = u[:, q_idx]
    return (
        Projector(p_cols @ p_cols.conj().T),
        Projector(q_cols @ q_cols.conj().T),
    )


# --- symbolic quadrature oracles ---------------------------------------------


def oracle_run_probability(measure: Measure, n: int, k: int) -> Fraction:
    """Exact run probability by symbolic integration (independent of qdutch).

    Integrates q**k (1-q)**(n-k) with q = lam*t + (1-lam)*(1-t) over the
    measure's eigenvalue density and uniform t.  Keep n small: symbolic
    integration cost grows quickly.
    """
    import sympy as sp

    lam, t = sp.symbols("lam t", positive=True)
    q = lam * t + (1 - lam) * (1 - t)
    integrand = q**k * (1 - q) ** (n - k)
    if measure is Measure.PURE_UNIFORM:
        value = sp.integrate(integrand.subs(lam, 1), (t, 0, 1))
    elif measure is Measure.FLAT:
        value = sp.integrate(sp.integrate(integrand, (t, 0, 1)), (lam, 0, 1))
    else:
        weight = 2 / sp.pi * (2 * lam - 1) ** 2 / sp.sqrt(lam * (1 - lam))
        inner = sp.expand(weight * sp.integrate(integrand, (t, 0, 1)))
        value = sp.simplify(sp.integrate(inner, (lam, 0, 1)))
    rational = sp.nsimplify(value, rational=True)
    return Fraction(int(rational.p), int(rational.q))


def oracle_beta(a: Fraction, b: Fraction):
    """Euler Beta via sympy's Gamma, as an exact sympy expression."""
    import sympy as sp

    a_s = sp.Rational(a.numerator, a.denominator)
    b_s = sp.Rational(b.numerator, b.denominator)
    return sp.simplify(sp.beta(a_s, b_s).rewrite(sp.gamma))
