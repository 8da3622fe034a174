"""qdutch: betting-book coherence, quantum conditioning, and succession laws.

The package has four computational layers plus a CLI:

* :mod:`qdutch.coherence` -- finite Boolean outcome algebras, conditional
  betting books, exact Dutch-book detection and axiom checks;
* :mod:`qdutch.quantum` -- projector algebra, Born-rule quotients,
  conditional quotients and projective state updates;
* :mod:`qdutch.exchangeable` -- exact rational succession laws for
  exchangeable qubit measurements under three state-space measures;
* :mod:`qdutch.montecarlo` -- a seeded, deterministic Monte Carlo estimator
  validating the exact engine;
* :mod:`qdutch.cli` -- the ``qdutch`` command.
"""

from .coherence import (
    AxiomViolation,
    Book,
    ConditionalBet,
    OutcomeSpace,
    OutcomeWord,
    Proposition,
    QuotientAssignment,
    assignment_from_book,
    average_payoff,
    average_payoff_product_joint,
    check_axioms,
    classical_predictive,
    event_probability,
    find_dutch_book,
    laplace_succession,
    payoff,
)
from .books import (
    dumps_book,
    format_proposition,
    load_book,
    loads_book,
    parse_expression,
    save_book,
)
from .errors import CapacityError, NullConditionError
from .exchangeable import (
    DEFAULT_N_CAP,
    Measure,
    PiScaledRational,
    RunSpec,
    SuccessionRow,
    beta_half,
    beta_int,
    correction_ratio,
    correction_term,
    distribution_over_k,
    run_probability,
    succession,
    succession_row,
    succession_table,
    write_succession_csv,
)
from .montecarlo import (
    ComparisonReport,
    SampleBatch,
    SampleConfig,
    StateSample,
    UnstableRatioWarning,
    compare_exact_vs_mc,
    draw_samples,
    estimate_run_probability,
    estimate_succession,
    sample_state,
)
from .quantum import (
    DensityOperator,
    Projector,
    QuantumBet,
    aggregated_update,
    born,
    commutes,
    conditional,
    join,
    load_density,
    load_projector,
    load_quantum_book,
    luders_update,
    meet,
    negate,
    operator_from_json,
    operator_to_json,
    quantum_average_payoff,
    save_operator,
)
from .rationals import format_decimal, format_rational, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "Book",
    "CapacityError",
    "ComparisonReport",
    "ConditionalBet",
    "DEFAULT_N_CAP",
    "DensityOperator",
    "Measure",
    "NullConditionError",
    "OutcomeSpace",
    "OutcomeWord",
    "PiScaledRational",
    "Projector",
    "Proposition",
    "QuantumBet",
    "QuotientAssignment",
    "RunSpec",
    "SampleBatch",
    "SampleConfig",
    "StateSample",
    "SuccessionRow",
    "UnstableRatioWarning",
    "aggregated_update",
    "assignment_from_book",
    "average_payoff",
    "average_payoff_product_joint",
    "beta_half",
    "beta_int",
    "born",
    "check_axioms",
    "classical_predictive",
    "commutes",
    "compare_exact_vs_mc",
    "conditional",
    "correction_ratio",
    "correction_term",
    "distribution_over_k",
    "draw_samples",
    "dumps_book",
    "estimate_run_probability",
    "estimate_succession",
    "event_probability",
    "find_dutch_book",
    "format_decimal",
    "format_proposition",
    "format_rational",
    "join",
    "laplace_succession",
    "load_book",
    "load_density",
    "load_projector",
    "load_quantum_book",
    "loads_book",
    "luders_update",
    "meet",
    "negate",
    "operator_from_json",
    "operator_to_json",
    "parse_expression",
    "parse_rational",
    "payoff",
    "quantum_average_payoff",
    "run_probability",
    "sample_state",
    "save_book",
    "save_operator",
    "succession",
    "succession_row",
    "succession_table",
    "write_succession_csv",
]
