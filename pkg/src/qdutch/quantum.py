"""Finite-dimensional projector algebra and projective state updates.

Propositions about a d-dimensional quantum system are projectors; a density
operator fixes the betting quotient of every projector via tr(rho P), and
conditioning on an observed projector Q updates the state to
Q rho Q / tr(rho Q).  Everything here is a pure function over immutable
numpy matrices.

Numerical contracts: operators are validated Hermitian/idempotent/positive
within ``OPERATOR_TOL`` after re-symmetrization (serialization rounding is
tolerated); subspace-intersection rank decisions use ``RANGE_CUT``;
conditioning on an event of probability below ``NULL_CONDITION_EPS`` raises
:class:`~qdutch.errors.NullConditionError`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import CapacityError, NullConditionError

OPERATOR_TOL = 1e-9
RANGE_CUT = 1e-8
NULL_CONDITION_EPS = 1e-12
MIN_DIM = 2
MAX_DIM = 16
#: quantum_average_payoff enumerates 4**bets outcome combinations.
MAX_QUANTUM_BETS = 10


def _validated_square(matrix, tol: float) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be square, got shape {m.shape}")
    d = m.shape[0]
    if d < MIN_DIM:
        raise ValueError(f"dimension {d} is below the minimum {MIN_DIM}")
    if d > MAX_DIM:
        raise CapacityError(f"dimension {d} exceeds the cap {MAX_DIM}")
    sym = 0.5 * (m + m.conj().T)
    if np.max(np.abs(sym - m)) > tol:
        raise ValueError("operator is not Hermitian within tolerance")
    sym.setflags(write=False)
    return sym


class Projector:
    """An orthogonal projector: Hermitian and idempotent within tolerance."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, *, tol: float = OPERATOR_TOL):
        m = _validated_square(matrix, tol)
        if np.max(np.abs(m @ m - m)) > tol:
            raise ValueError("operator is not idempotent within tolerance")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.real(np.trace(self.matrix))))

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def from_ket(cls, ket) -> "Projector":
        """Rank-1 projector onto a (not necessarily normalized) state vector."""
        v = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("cannot project onto the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def onto(cls, vectors) -> "Projector":
        """Projector onto the span of the given column vectors."""
        cols = np.asarray(vectors, dtype=complex)
        if cols.ndim == 1:
            cols = cols[:, None]
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        keep = s > RANGE_CUT * max(1.0, s[0] if s.size else 1.0)
        basis = u[:, keep]
        return cls(basis @ basis.conj().T)

    def __repr__(self) -> str:
        return f"Projector(dim={self.dim}, rank={self.rank})"


class DensityOperator:
    """A state of knowledge: Hermitian, positive semidefinite, unit trace."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, *, tol: float = OPERATOR_TOL):
        m = _validated_square(matrix, tol)
        if np.min(np.linalg.eigvalsh(m)) < -tol:
            raise ValueError("density operator has a negative eigenvalue")
        if abs(np.real(np.trace(m)) - 1.0) > tol:
            raise ValueError("density operator does not have unit trace")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim) / dim)

    @classmethod
    def pure(cls, ket) -> "DensityOperator":
        return cls(Projector.from_ket(ket).matrix)

    @classmethod
    def diagonal(cls, weights) -> "DensityOperator":
        w = np.asarray(weights, dtype=float)
        return cls(np.diag(w / w.sum()))

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim})"


def _check_dims(*ops) -> int:
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def negate(p: Projector) -> Projector:
    """Projector onto the orthogonal complement of the range."""
    return Projector(np.eye(p.dim) - p.matrix)


def _range_basis(p: Projector) -> np.ndarray:
    vals, vecs = np.linalg.eigh(p.matrix)
    return vecs[:, vals > 0.5]


def meet(p: Projector, q: Projector) -> Projector:
    """Projector onto the intersection of the two ranges.

    Computed from orthonormal range bases: the singular values of the basis
    overlap are cosines of principal angles, and directions with cosine
    within ``RANGE_CUT`` of 1 span the intersection.  For commuting inputs
    this agrees with the product p q.
    """
    _check_dims(p, q)
    bp = _range_basis(p)
    bq = _range_basis(q)
    if bp.shape[1] == 0 or bq.shape[1] == 0:
        return Projector.zero(p.dim)
    u, s, _ = np.linalg.svd(bp.conj().T @ bq, full_matrices=False)
    shared = bp @ u[:, s >= 1.0 - RANGE_CUT]
    if shared.shape[1] == 0:
        return Projector.zero(p.dim)
    return Projector(shared @ shared.conj().T)


def join(p: Projector, q: Projector) -> Projector:
    """Projector onto the closed span of the two ranges (De Morgan dual of meet)."""
    return negate(meet(negate(p), negate(q)))


def commutes(p: Projector, q: Projector, *, tol: float = OPERATOR_TOL) -> bool:
    _check_dims(p, q)
    return bool(np.max(np.abs(p.matrix @ q.matrix - q.matrix @ p.matrix)) <= tol)


def born(rho: DensityOperator, p: Projector) -> float:
    """Betting quotient of a projector under a state: tr(rho P) in [0, 1]."""
    _check_dims(rho, p)
    value = float(np.real(np.trace(rho.matrix @ p.matrix)))
    return min(1.0, max(0.0, value))


def conditional(
    rho: DensityOperator,
    p: Projector,
    q: Projector,
    *,
    eps: float = NULL_CONDITION_EPS,
) -> float:
    """Quotient of p given that q was observed true: tr(QrQ P)/tr(rQ)."""
    _check_dims(rho, p, q)
    weight = float(np.real(np.trace(rho.matrix @ q.matrix)))
    if weight <= eps:
        raise NullConditionError(
            f"conditioning event has probability {weight:.3e} <= {eps:.0e}"
        )
    qrq = q.matrix @ rho.matrix @ q.matrix
    value = float(np.real(np.trace(qrq @ p.matrix))) / weight
    return min(1.0, max(0.0, value))


def luders_update(
    rho: DensityOperator,
    q: Projector,
    *,
    eps: float = NULL_CONDITION_EPS,
) -> DensityOperator:
    """Post-observation state Q rho Q / tr(rho Q)."""
    _check_dims(rho, q)
    weight = float(np.real(np.trace(rho.matrix @ q.matrix)))
    if weight <= eps:
        raise NullConditionError(
            f"conditioning event has probability {weight:.3e} <= {eps:.0e}"
        )
    return DensityOperator(q.matrix @ rho.matrix @ q.matrix / weight)


def aggregated_update(
    rho: DensityOperator,
    qs: Sequence[Projector],
    *,
    eps: float = NULL_CONDITION_EPS,
) -> DensityOperator:
    """Pooled post-observation state over a projector family.

    Equals the quotient-weighted mixture of the individual updated states:
    sum_i Q_i rho Q_i / sum_i tr(rho Q_i).
    """
    if not qs:
        raise ValueError("need at least one conditioning projector")
    _check_dims(rho, *qs)
    total = sum(float(np.real(np.trace(rho.matrix @ q.matrix))) for q in qs)
    if total <= eps:
        raise NullConditionError(
            f"all conditioning events are null (total probability {total:.3e})"
        )
    mixed = sum(q.matrix @ rho.matrix @ q.matrix for q in qs)
    return DensityOperator(mixed / total)


@dataclass(frozen=True)
class QuantumBet:
    """A conditional bet on ``target`` given ``condition``.

    ``quotient=None`` means "derive it from the state" when the bet is
    evaluated.  Outright bets use the identity as condition.
    """

    target: Projector
    condition: Projector
    quotient: Optional[float] = None
    stake: float = 1.0

    @classmethod
    def outright(cls, target: Projector, quotient=None, stake=1.0) -> "QuantumBet":
        return cls(target, Projector.identity(target.dim), quotient, stake)


def quantum_average_payoff(
    book: Sequence[QuantumBet],
    rho: DensityOperator,
    *,
    max_bets: int = MAX_QUANTUM_BETS,
) -> float:
    """State-averaged payoff of a book of conditional projector bets.

    Every combination of per-bet (target, condition) outcomes is enumerated;
    a combination's probability is the product over bets of
    tr(Q' rho Q' P') with P', Q' the projector or its negation as observed.
    With quotients given by the state itself the average is zero up to
    rounding, whatever the stakes.
    """
    if len(book) > max_bets:
        raise CapacityError(
            f"average payoff enumerates 4**{len(book)} outcomes; cap is {max_bets} bets"
        )
    if not book:
        return 0.0
    _check_dims(rho, *(b.target for b in book), *(b.condition for b in book))

    probs = np.array([1.0])
    gains = np.array([0.0])
    for bet in book:
        p_m = bet.target.matrix
        q_m = bet.condition.matrix
        np_m = np.eye(bet.target.dim) - p_m
        nq_m = np.eye(bet.target.dim) - q_m
        qrq = q_m @ rho.matrix @ q_m
        nqrnq = nq_m @ rho.matrix @ nq_m
        p_win = float(np.real(np.trace(qrq @ p_m)))
        p_lose = float(np.real(np.trace(qrq @ np_m)))
        p_off_t = float(np.real(np.trace(nqrnq @ p_m)))
        p_off_f = float(np.real(np.trace(nqrnq @ np_m)))
        quotient = bet.quotient
        if quotient is None:
            on = p_win + p_lose      # = tr(rho Q)
            if on <= NULL_CONDITION_EPS:
                raise NullConditionError(
                    "cannot derive a quotient: conditioning event is null"
                )
            quotient = p_win / on
        bet_probs = np.maximum([p_win, p_lose, p_off_t, p_off_f], 0.0)
        bet_gains = np.array(
            [(1.0 - quotient) * bet.stake, -quotient * bet.stake, 0.0, 0.0]
        )
        probs = np.multiply.outer(probs, bet_probs).ravel()
        gains = np.add.outer(gains, bet_gains).ravel()
    return float(probs @ gains)


# --- operator files ---------------------------------------------------------
#
# Text format: {"dim": d, "entries": [[re, im], ...]} with d*d row-major
# entries as decimal doubles.

def operator_to_json(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def operator_from_json(doc: dict) -> np.ndarray:
    try:
        dim = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"operator file missing field: {exc}") from exc
    if len(entries) != dim * dim:
        raise ValueError(
            f"operator file dim={dim} needs {dim * dim} entries, found {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(dim, dim)


def save_operator(matrix: np.ndarray, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(operator_to_json(matrix)) + "\n")


def _load_json(path: Union[str, Path]) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc


def load_projector(path: Union[str, Path], *, tol: float = OPERATOR_TOL) -> Projector:
    return Projector(operator_from_json(_load_json(path)), tol=tol)


def load_density(path: Union[str, Path], *, tol: float = OPERATOR_TOL) -> DensityOperator:
    return DensityOperator(operator_from_json(_load_json(path)), tol=tol)


def load_quantum_book(
    path: Union[str, Path], *, tol: float = OPERATOR_TOL
) -> list[QuantumBet]:
    """Load a quantum book file.

    Format: {"dim": d, "bets": [{"target": entries, "condition": entries or
    null, "quotient": number or null, "stake": number}]} where entries use
    the operator-file convention; a null condition means an outright bet.
    """
    doc = _load_json(path)
    try:
        dim = int(doc["dim"])
        raw_bets = doc["bets"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: book file missing field: {exc}") from exc
    bets = []
    for i, raw in enumerate(raw_bets):
        try:
            target = Projector(
                operator_from_json({"dim": dim, "entries": raw["target"]}), tol=tol
            )
            if raw.get("condition") is None:
                condition = Projector.identity(dim)
            else:
                condition = Projector(
                    operator_from_json({"dim": dim, "entries": raw["condition"]}), tol=tol
                )
            quotient = raw.get("quotient")
            quotient = None if quotient is None else float(quotient)
            stake = float(raw.get("stake", 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: bet #{i}: {exc}") from exc
        bets.append(QuantumBet(target, condition, quotient, stake))
    return bets
