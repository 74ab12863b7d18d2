"""
Rössler: two generatex classes around one hole
==============================================

The four-cell templex has a single junction edge where γ3 and γ4 merge
back into γ1. Homology sees one hole; the directed cycles see two ways
around it, and only one of them folds.
"""

from templexkit.fixtures import rossler_templex
from templexkit.genex import bonds, generatex_classes
from templexkit.homology import homology
from templexkit.ingest import REFERENCE_RUNS, rossler_strip_itinerary, simulate
from templexkit.templex import junction_loci, poincare_edges
from templexkit.tmv import label_trajectory, tmv_stats

T = rossler_templex()
print("H =", [str(h) for h in homology(T.complex)])
for locus in junction_loci(T):
    print("locus", locus)
print("Poincaré edges:", ", ".join(str(e) for e in poincare_edges(T)))

classes = generatex_classes(T)
for g in classes:
    print(g, "|", g.orientation)
for b in bonds(classes):
    print(b)

# integrate the flow and read the strip each sample lies on
traj = simulate("rossler", **REFERENCE_RUNS["rossler"])
it = rossler_strip_itinerary(traj)
d = label_trajectory(it, T, classes)
st = tmv_stats(d)
print(f"{st.n_intervals} intervals over t = {st.duration:.0f}")
for lab in d.labels:
    print(f"  G{lab}: {st.counts[lab]} visits, mean residence {st.means[lab]:.2f}")
print(f"mean residence ratio G1/G2 = {st.ratio(1, 2):.2f}")
