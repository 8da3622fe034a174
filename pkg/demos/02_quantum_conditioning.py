# Projectors as propositions: Born quotients, conditional quotients, and
# the two flavors of post-observation state update.
# Run with:  python demos/02_quantum_conditioning.py

import numpy as np

from qdutch import (
    DensityOperator,
    Projector,
    QuantumBet,
    aggregated_update,
    born,
    commutes,
    conditional,
    join,
    luders_update,
    meet,
    negate,
    quantum_average_payoff,
)

up = Projector.from_ket([1, 0])
plus = Projector.from_ket([1, 1])
rho = DensityOperator(np.array([[0.7, 0.2], [0.2, 0.3]]))

print("== quotients from a state ==")
print(f"  q(up)   = {born(rho, up):.4f}")
print(f"  q(plus) = {born(rho, plus):.4f}")
print(f"  q(up) + q(not up) = {born(rho, up) + born(rho, negate(up)):.4f}")

print("\n== the projector lattice is not Boolean ==")
print(f"  [up, plus] commute? {commutes(up, plus)}")
print(f"  rank of meet(up, plus) = {meet(up, plus).rank}   (rays only meet at 0)")
print(f"  rank of join(up, plus) = {join(up, plus).rank}")
# for non-commuting pairs the multiplication law fails:
lhs = born(rho, meet(up, plus))
rhs = conditional(rho, up, plus) * born(rho, plus)
print(f"  q(meet) = {lhs:.4f}  vs  q(up|plus) q(plus) = {rhs:.4f}")

print("\n== conditioning is a state update ==")
print(f"  q(up | plus) = {conditional(rho, up, plus):.4f}")
updated = luders_update(rho, plus)
print(f"  born after update = {born(updated, up):.4f}   (same number)")
print(f"  updated state is certain of its condition: q(plus) = {born(updated, plus):.4f}")

print("\n== pooling outcomes decoheres ==")
pooled = aggregated_update(rho, [up, negate(up)])
print("  rho averaged over the up/down readout:")
print(np.array_str(pooled.matrix.real, precision=4, suppress_small=True))

print("\n== a fair quantum book ==")
book = [
    QuantumBet(up, plus, stake=3.0),        # quotient derived from rho
    QuantumBet.outright(plus, stake=-2.0),
]
print(f"  average payoff with state-derived quotients: {quantum_average_payoff(book, rho):.2e}")
skewed = [QuantumBet(up, plus, conditional(rho, up, plus) + 0.1, stake=1.0)]
print(f"  ... after inflating one quotient by 0.1:     {quantum_average_payoff(skewed, rho):+.4f}")
print(f"      (equals -0.1 * q(plus) = {-0.1 * born(rho, plus):+.4f})")
