"""
Lorenz: modes of variability and tipping windows
================================================

Three classes: one loop per wing and an order-two class that crosses
between them. Wing switches always go through G3.
"""

import numpy as np

from templexkit.fixtures import lorenz_templex
from templexkit.genex import generatex_classes, multigraph_view
from templexkit.ingest import REFERENCE_RUNS, lorenz_strip_itinerary, simulate
from templexkit.tmv import label_trajectory, tipping_timeline, tmv_stats, transition_matrix

T = lorenz_templex()
classes = generatex_classes(T)
for g in classes:
    print(g)
    for s in g.stripexes:
        print("    stripex", s)

traj = simulate("lorenz", **REFERENCE_RUNS["lorenz"])
d = label_trajectory(lorenz_strip_itinerary(traj), T, classes)
st = tmv_stats(d)
print("visits per class:", st.counts)
print("transitions (row = from):")
print(transition_matrix(d))

# first 12 entries of σ, the class sequence
print("σ =", " ".join(f"G{s}" for s in d.sigma[:12]), "...")

# a window of two time units mostly sees a single class; the moments where
# the set of active classes changes are the tipping points
tl = tipping_timeline(d, window=2.0, stride=0.5)
times = np.array(tl.event_times)
print(f"{len(times)} tipping events, median spacing {np.median(np.diff(times)):.2f}")

print(multigraph_view(classes).to_dot("lorenz"))
