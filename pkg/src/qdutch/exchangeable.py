"""Exact success-run probabilities for exchangeable qubit measurements.

A sequence of projective yes/no measurements on exchangeable qubits is
described by a mixture of product states; the mixing measure over single
qubit density operators fixes everything.  Three measures are supported:

* ``PURE_UNIFORM`` -- unitarily invariant measure on pure states;
* ``FLAT`` -- unitarily invariant rotations times a uniform eigenvalue
  distribution on the density-operator simplex;
* ``BURES`` -- rotations times the eigenvalue density ``(2/pi) *
  (2*lam - 1)**2 / sqrt(lam*(1 - lam))`` induced by the fidelity metric.

For each measure, ``run_probability(measure, RunSpec(n, k))`` is the exact
rational probability of seeing the projector true on the first k of n
measurements.  The predictive probability of one more success is the
Laplace rule (k+1)/(n+2) times a measure-dependent correction ratio; the
correction term itself is computed by ``correction_term`` as a double
binomial sum over exact Beta values.

All arithmetic is exact; decimal rendering happens only at the output
boundary (12 significant digits).
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, TextIO, Union

from .coherence import laplace_succession
from .errors import CapacityError
from .rationals import format_decimal, format_rational

#: Largest trial count accepted by the exact engine (runtimes stay desk-scale).
DEFAULT_N_CAP = 2000


class Measure(Enum):
    PURE_UNIFORM = "pure"
    FLAT = "flat"
    BURES = "bures"


@dataclass(frozen=True)
class RunSpec:
    """A frequency record: k successes observed in n trials."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ValueError("counts must be nonnegative")
        if self.k > self.n:
            raise ValueError(f"successes k={self.k} exceed trials n={self.n}")


@dataclass(frozen=True)
class PiScaledRational:
    """An exact value ``coeff * pi**pi_power`` with pi_power in {0, 1}.

    Beta values at half-integer arguments carry one factor of pi; it cancels
    against the 1/pi in the Bures eigenvalue density, so every user-facing
    result has pi_power 0.  Addition requires matching powers; multiplication
    adds them and must stay inside {0, 1}.
    """

    coeff: Fraction
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.pi_power not in (0, 1):
            raise ValueError(f"pi_power must be 0 or 1, got {self.pi_power}")

    def __add__(self, other: "PiScaledRational") -> "PiScaledRational":
        if not isinstance(other, PiScaledRational):
            return NotImplemented
        if self.pi_power != other.pi_power:
            raise ValueError("cannot add values with different pi powers")
        return PiScaledRational(self.coeff + other.coeff, self.pi_power)

    def __mul__(self, other) -> "PiScaledRational":
        if isinstance(other, PiScaledRational):
            return PiScaledRational(
                self.coeff * other.coeff, self.pi_power + other.pi_power
            )
        return PiScaledRational(self.coeff * Fraction(other), self.pi_power)

    __rmul__ = __mul__

    def over_pi(self) -> "PiScaledRational":
        """Divide by pi (only legal when a factor of pi is present)."""
        return PiScaledRational(self.coeff, self.pi_power - 1)

    def as_fraction(self) -> Fraction:
        if self.pi_power != 0:
            raise ValueError("value still carries a factor of pi")
        return self.coeff

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** self.pi_power


def beta_int(a: int, b: int) -> PiScaledRational:
    """Euler Beta at positive integer arguments: (a-1)!(b-1)!/(a+b-1)!."""
    if a < 1 or b < 1:
        raise ValueError("beta_int needs positive integer arguments")
    return PiScaledRational(
        Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))
    )


def beta_half(a2: int, b2: int) -> PiScaledRational:
    """Euler Beta at half-integer arguments a2/2, b2/2 (a2, b2 odd).

    With Gamma(m + 1/2) = (2m)! sqrt(pi) / (4**m m!), the value is an exact
    rational multiple of pi; the result has pi_power 1.
    """
    if a2 < 1 or b2 < 1 or a2 % 2 == 0 or b2 % 2 == 0:
        raise ValueError("beta_half needs odd positive arguments (numerators over 2)")
    m, n = (a2 - 1) // 2, (b2 - 1) // 2
    coeff = Fraction(
        math.factorial(2 * m) * math.factorial(2 * n),
        4 ** (m + n) * math.factorial(m) * math.factorial(n) * math.factorial(m + n),
    )
    return PiScaledRational(coeff, 1)


def _check_cap(n: int, n_cap: int) -> None:
    if n > n_cap:
        raise CapacityError(f"trial count {n} exceeds the configured cap {n_cap}")


# --- correction term: literal double binomial sum -------------------------

def correction_term(
    measure: Measure, spec: RunSpec, *, n_cap: int = DEFAULT_N_CAP
) -> Fraction:
    """The factor multiplying the pure-state run probability for a measure.

    Computed as the double sum over j in [0, k], l in [0, n-k] of
    ``C(j+l, j) * C(n-j-l, k-j) * kernel(r)`` with r = k - j + l, where the
    kernel is the measure's eigenvalue moment: B(n-r+1, r+1) for the flat
    measure, and ``(2/pi) * ((n-2r)**2 + n + 1) / ((r+1/2)(n-r+1/2)) *
    B(n-r+3/2, r+3/2)`` for the Bures measure.  Identically 1 for the pure
    measure, which makes the predictive formula uniform across measures.
    """
    _check_cap(spec.n, n_cap)
    n, k = spec.n, spec.k
    if measure is Measure.PURE_UNIFORM:
        return Fraction(1)

    # Group the (j, l) terms by r: the kernel depends on r alone, so the
    # expensive Beta values are computed once per r instead of once per term.
    weights = [0] * (n + 1)
    for j in range(k + 1):
        for l in range(n - k + 1):
            weights[k - j + l] += math.comb(j + l, j) * math.comb(n - j - l, k - j)

    if measure is Measure.FLAT:
        total = Fraction(0)
        for r, w in enumerate(weights):
            if w:
                total += w * beta_int(n - r + 1, r + 1).as_fraction()
        return total

    total_pi = PiScaledRational(Fraction(0), 1)
    for r, w in enumerate(weights):
        if not w:
            continue
        quad = (n - 2 * r) ** 2 + n + 1
        # 2 * quad / ((r+1/2)(n-r+1/2)) = 8 * quad / ((2r+1)(2n-2r+1))
        rational_part = Fraction(8 * quad * w, (2 * r + 1) * (2 * (n - r) + 1))
        total_pi = total_pi + beta_half(2 * (n - r) + 3, 2 * r + 3) * rational_part
    return total_pi.over_pi().as_fraction()


# --- run probabilities: eigenvalue-moment route ----------------------------
#
# Under every supported measure the single-trial success probability is
# q = lam1*t + lam2*(1-t) with t uniform on [0, 1], i.e. q is uniform on
# [lam2, lam1].  Averaging t exactly turns the run probability into a short
# alternating sum over the symmetrized eigenvalue moments
#   sigma_j = E[ sum_{a+b=j} lam1**a lam2**b ],
# which this module accumulates in integer arithmetic and caches per measure.
# The route is an exact algebraic regrouping of the double binomial sum used
# by `correction_term`; the test suite pins the two against each other.

_sigma_lock = threading.Lock()
_sigma_cache: dict[Measure, list[Fraction]] = {Measure.FLAT: [], Measure.BURES: []}
_flat_factorials = [1]       # i!
_bures_ratios = [1]          # (2i)!/i!


def _sigma_upto(measure: Measure, j_max: int) -> list[Fraction]:
    cache = _sigma_cache[measure]
    if len(cache) > j_max:
        return cache
    with _sigma_lock:
        while len(cache) <= j_max:
            j = len(cache)
            if measure is Measure.FLAT:
                while len(_flat_factorials) <= j + 1:
                    _flat_factorials.append(_flat_factorials[-1] * len(_flat_factorials))
                num = sum(_flat_factorials[a] * _flat_factorials[j - a] for a in range(j + 1))
                cache.append(Fraction(num, _flat_factorials[j + 1]))
            else:
                while len(_bures_ratios) <= j:
                    i = len(_bures_ratios)
                    _bures_ratios.append(_bures_ratios[-1] * 2 * (2 * i - 1))
                num = 8 * sum(
                    ((2 * a - j) ** 2 + j + 1) * _bures_ratios[a] * _bures_ratios[j - a]
                    for a in range(j + 1)
                )
                cache.append(Fraction(num, 4 ** (j + 1) * math.factorial(j + 2)))
    return cache


def run_probability(
    measure: Measure, spec: RunSpec, *, n_cap: int = DEFAULT_N_CAP
) -> Fraction:
    """Exact probability of the projector holding on the first k of n trials.

    Exchange symmetry is built in: the value depends on (n, k) only, never on
    the order of outcomes.
    """
    _check_cap(spec.n, n_cap)
    n, k = spec.n, spec.k
    if measure is Measure.PURE_UNIFORM:
        # Beta(k+1, n-k+1) in closed form.
        return Fraction(1, (n + 1) * math.comb(n, k))
    sigmas = _sigma_upto(measure, n)
    total = Fraction(0)
    binom = 1
    for s in range(n - k + 1):
        coeff = Fraction(binom if s % 2 == 0 else -binom, k + s + 1)
        total += sigmas[k + s] * coeff
        binom = binom * (n - k - s) // (s + 1)
    return total


def succession(
    measure: Measure, spec: RunSpec, *, n_cap: int = DEFAULT_N_CAP
) -> Fraction:
    """Predictive probability of success number k+1 after k successes in n
    trials: the Laplace rule times the measure's correction ratio.
    """
    _check_cap(spec.n + 1, n_cap)
    denom = run_probability(measure, spec, n_cap=n_cap)
    numer = run_probability(measure, RunSpec(spec.n + 1, spec.k + 1), n_cap=n_cap)
    return numer / denom


def correction_ratio(
    measure: Measure, spec: RunSpec, *, n_cap: int = DEFAULT_N_CAP
) -> Fraction:
    """Deviation factor from the Laplace rule (exactly 1 for the pure measure)."""
    return succession(measure, spec, n_cap=n_cap) * Fraction(spec.n + 2, spec.k + 1)


def distribution_over_k(
    measure: Measure, n: int, *, n_cap: int = DEFAULT_N_CAP
) -> list[Fraction]:
    """Exact distribution of the success count over n trials.

    Entry k multiplies the single-ordering run probability by C(n, k): by
    exchange symmetry every ordering is equally likely.  The entries sum to
    exactly 1.
    """
    if n < 0:
        raise ValueError("counts must be nonnegative")
    _check_cap(n, n_cap)
    return [
        math.comb(n, k) * run_probability(measure, RunSpec(n, k), n_cap=n_cap)
        for k in range(n + 1)
    ]


# --- succession tables ------------------------------------------------------

SUCCESSION_CSV_COLUMNS = (
    "measure",
    "n",
    "k",
    "correction_ratio_exact",
    "correction_ratio_decimal",
    "succession_decimal",
    "laplace_decimal",
)


@dataclass(frozen=True)
class SuccessionRow:
    measure: Measure
    n: int
    k: int
    correction_ratio: Fraction
    succession: Fraction
    laplace: Fraction

    def csv_fields(self) -> tuple[str, ...]:
        return (
            self.measure.value,
            str(self.n),
            str(self.k),
            format_rational(self.correction_ratio),
            format_decimal(self.correction_ratio),
            format_decimal(self.succession),
            format_decimal(self.laplace),
        )


def round_half_up(x: Fraction) -> int:
    """The k-grid convention: round(k_fraction * n) with ties going up."""
    return math.floor(x + Fraction(1, 2))


def succession_row(
    measure: Measure, spec: RunSpec, *, n_cap: int = DEFAULT_N_CAP
) -> SuccessionRow:
    succ = succession(measure, spec, n_cap=n_cap)
    return SuccessionRow(
        measure=measure,
        n=spec.n,
        k=spec.k,
        correction_ratio=succ * Fraction(spec.n + 2, spec.k + 1),
        succession=succ,
        laplace=laplace_succession(spec.n, spec.k),
    )


def succession_table(
    measure: Measure,
    n_values: Iterable[int],
    k_fraction: Union[Fraction, int, str],
    *,
    n_cap: int = DEFAULT_N_CAP,
) -> list[SuccessionRow]:
    """Correction-ratio rows along an n grid at a fixed relative frequency.

    For each n the success count is k = round(k_fraction * n); rows carry the
    exact correction ratio together with the succession and Laplace values.
    """
    k_fraction = Fraction(k_fraction)
    rows = []
    for n in n_values:
        if n < 0:
            raise ValueError("counts must be nonnegative")
        k = round_half_up(k_fraction * n)
        if not 0 <= k <= n:
            raise ValueError(
                f"k_fraction {k_fraction} puts k={k} outside [0, {n}]"
            )
        rows.append(succession_row(measure, RunSpec(n, k), n_cap=n_cap))
    return rows


def write_succession_csv(rows: Sequence[SuccessionRow], fh: TextIO) -> None:
    writer = csv.writer(fh)
    writer.writerow(SUCCESSION_CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
