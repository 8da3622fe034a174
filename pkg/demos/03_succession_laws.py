# Predictive probability of one more success, exactly, under three priors
# over qubit states -- and how each deviates from the classical (k+1)/(n+2)
# rule at small n.  Run with:  python demos/03_succession_laws.py

import io
from fractions import Fraction as F

from qdutch import (
    Measure,
    RunSpec,
    distribution_over_k,
    laplace_succession,
    run_probability,
    succession,
    succession_table,
    write_succession_csv,
)

print("== after seeing 1 success in 1 trial, how likely is another? ==")
print(f"  classical uniform prior : {laplace_succession(1, 1)}")
for measure in Measure:
    print(f"  {measure.value:5s} state measure     : {succession(measure, RunSpec(1, 1))}")

print("\n== exact run probabilities (n=2) ==")
for measure in Measure:
    values = [run_probability(measure, RunSpec(2, k)) for k in range(3)]
    print(f"  {measure.value:5s}: {values}  (success-count law: {distribution_over_k(measure, 2)})")

print("\n== correction ratio vs n at fixed k/n = 1/5 ==")
grid = [10, 20, 40, 80, 160, 320]
header = "  n      flat ratio            bures ratio"
print(header)
for n in grid:
    flat = succession_table(Measure.FLAT, [n], F(1, 5))[0].correction_ratio
    bures = succession_table(Measure.BURES, [n], F(1, 5))[0].correction_ratio
    print(f"  {n:<5d}  {float(flat):<20.12g}  {float(bures):.12g}")
print("  (both columns drift toward 1; the Bures prior hugs the classical rule tighter)")

print("\n== plot-ready CSV ==")
buf = io.StringIO()
write_succession_csv(succession_table(Measure.BURES, grid, F(1, 5)), buf)
print("\n".join("  " + line for line in buf.getvalue().strip().splitlines()[:4]))
print("  ...")
