"""
Homology of the classic surfaces
================================

Minimal CW models: one or two 0-cells, a few 1-cells and a single 2-cell
whose attaching word glues the edges of a polygon.
"""

from templexkit.fixtures import SURFACES, build_fixture
from templexkit.homology import betti_table, homology, orientability_report

# Betti numbers over the integers, plus the orientability verdict
print(f"{'surface':10s} b0 b1 b2  orientability")
for name in SURFACES:
    row = betti_table(build_fixture(name)).row()
    print(f"{name:10s} {row[0]:2d} {row[1]:2d} {row[2]:2d}  {row[3]}")

# the Klein bottle carries torsion: H1 = ℤ ⊕ ℤ/2
K = build_fixture("klein")
for h in homology(K):
    print(f"H{h.k}(Klein) = {h}")

# cylinder and Möbius band share their Betti numbers; the orientability
# chain is what tells them apart
for name in ("cylinder", "mobius"):
    rep = orientability_report(build_fixture(name))
    print(name, "chain:", rep.chain, "witness:", rep.witness)
