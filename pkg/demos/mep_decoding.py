"""
Decoding a multi-expression chromosome
======================================

A chromosome is a list of genes; each gene is either a terminal or a
function applied to earlier genes, so one linear pass evaluates all of
them.  Every gene is a candidate solution and the multi-solution fitness
keeps the best one; the single-solution reading only scores the last gene.
"""

import numpy as np

from multigp import mep
from multigp.core import FitnessCaseSet, PrimitiveSet

T, F = mep.MepGene.terminal, mep.MepGene.function

# four named terminals; gene 7 multiplies the two sums built before it,
# and the trailing terminal makes the last gene a deliberately poor pick
prims = PrimitiveSet(terminals=("a", "b", "c", "d"))
chrom = mep.MepChromosome((
    T(0), T(1), F("add", 0, 1), T(2), T(3), F("add", 3, 4),
    F("mul", 2, 5), T(0),
))
print(mep.render(chrom, prims))
print()

# each gene encodes an expression over the genes before it
for i in range(len(chrom)):
    print(f"E{i + 1} = {mep.expression(chrom, i, prims)}")

# score all eight candidates in one decoding pass; target is (a+b)*(c+d)
cases = FitnessCaseSet(
    inputs=np.array([[1.0, 2.0, 3.0, 4.0], [2.0, 0.5, 1.0, 5.0]]),
    targets=np.array([21.0, 15.0]),
)
fit, best = mep.fitness(chrom, cases, "multi")
print(f"\nmulti reading:  E{best + 1} = {mep.expression(chrom, best, prims)}"
      f", error {fit}")

fit_last, last = mep.fitness(chrom, cases, "single")
print(f"single reading: E{last + 1} = {mep.expression(chrom, last, prims)}"
      f", error {fit_last}")
