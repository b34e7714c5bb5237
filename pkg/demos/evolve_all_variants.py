"""
One evolution run per variant
=============================

Six variant labels pair the three encodings with the two fitness
readings.  The same seed hands every variant the same random stream, and
the problem instance is drawn from that stream, so paired variants face
identical conditions.
"""

from multigp.harness import VARIANTS, run_one

# quartic problem f1, one seeded run per variant
for variant in VARIANTS:
    length = 24 if "ifgp" in variant else 16
    result = run_one(variant, "f1", length, 50, seed=42)
    print(f"{variant:8s} fitness {result.final_fitness:10.4f}  "
          f"success {str(result.success):5s}  evaluations {result.evaluations}")

# the run result carries the winning expression; show the plain-MEP one
result = run_one("mep", "f1", 16, 50, seed=42)
print(f"\nmep best expression: {result.expression}")
print(f"best error per generation, first 10: "
      f"{[round(v, 2) for v in result.best_per_generation[:10]]}")
