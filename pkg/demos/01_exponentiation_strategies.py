"""
Matrix powers: repeated multiplication vs. square-and-multiply
==============================================================

Raising a matrix A to the power N takes N-1 multiplies the obvious way.
Scanning the bits of N instead needs only floor(log2 N) + popcount(N) - 1,
and the plan for that scan is a first-class object here.
"""

import numpy as np

from matexpo import (
    DType,
    Matrix,
    Strategy,
    compare,
    count_transfers,
    exponentiate,
    multiply_count_for,
    naive_backend,
    plan_exponentiation,
    random_matrix,
    repeated_exponentiate,
)

# A plan is the exact sequence of SQUARE / MULTIPLY_BASE steps.  For N = 13
# (binary 1101) the scan squares three times and folds the base in twice.
plan = plan_exponentiation(13)
print("steps for A^13: ", " ".join(step.value for step in plan.steps))
print("multiplies:     ", plan.multiply_count)

# The count law, side by side with the baseline, for the powers a benchmark
# sweep would use.
print("\npower  repeated  squared")
for power in (64, 128, 256, 512, 1024):
    print(
        f"{power:5d}  {multiply_count_for(Strategy.REPEATED, power):8d}"
        f"  {multiply_count_for(Strategy.SQUARED, power):7d}"
    )

# Both strategies agree numerically.  The repeated product is the oracle;
# the scaled residual stays far below one part in a million here.
a = random_matrix(16, DType.F64, seed=42)
fast = exponentiate(a, 13, naive_backend())
slow = repeated_exponentiate(a, 13, naive_backend())
print("\nmax_rel(squared vs repeated) =", compare(fast, slow).max_rel)

# A classic exact fixture: powers of the Fibonacci Q-matrix stay integral
# in float64, so A^10 must come out exactly.
q = Matrix.from_rows([[1.0, 1.0], [1.0, 0.0]])
print("\nQ^10 =")
print(np.array2string(exponentiate(q, 10, naive_backend()).array, precision=0))

# Off-device cost is not only multiplies: repeated multiplication ships a
# matrix across the host-device boundary once per power step, while
# square-and-multiply uploads once and reads back once.
plan_1024 = plan_exponentiation(1024)
print("\ntransfers for N=1024: repeated =",
      count_transfers(plan_1024, Strategy.REPEATED),
      " squared =", count_transfers(plan_1024, Strategy.SQUARED))
