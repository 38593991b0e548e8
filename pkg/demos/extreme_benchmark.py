"""Median query counts on the product/Bell instance, where gamma * lambda = 2^{n/2 - 1}.

The indirect/direct ratio should follow (gamma lambda)^-2 for the Hadamard test
and (gamma lambda)^-1 for amplitude estimation.
"""

from matramp.experiments import run_extreme_case

print(f"{'n':>2} {'target':>6} {'gl':>6} {'sql ratio':>10} {'pred':>7} {'hl ratio':>9} {'pred':>7}")
for n in (2, 3, 4):
    table = run_extreme_case(n, seeds=range(50))
    for label in ("sqrt", "full"):
        s = table.summary[label]
        print(f"{n:>2} {label:>6} {s['gamma_lambda']:6.3f} {s['ratio_sql']:10.4f} "
              f"{s['predicted_sql']:7.4f} {s['ratio_hl']:9.4f} {s['predicted_hl']:7.4f}")
