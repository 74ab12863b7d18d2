"""
From a point cloud to a templex
===============================

build_bramah clusters the samples, checks that each cluster is locally
two-dimensional, triangulates landmarks on tangent planes and grows one
disk-shaped 2-cell per cluster. An annulus swept around by a rotating
flow comes back as a single cycle with no junction.
"""

import numpy as np

from templexkit.genex import generatex_classes
from templexkit.homology import betti_numbers
from templexkit.ingest import Trajectory, build_bramah, scaling_dimension

rng = np.random.default_rng(0)
n = 4000
theta = np.linspace(0, 40 * np.pi, n)
r = 1 + 0.5 * rng.random(n)
points = np.c_[r * np.cos(theta), r * np.sin(theta), 0.01 * rng.standard_normal(n)]
traj = Trajectory(np.arange(float(n)), points)

# local dimension around a point of the band: two singular values grow
# linearly with the neighborhood size, the thin direction does not
sizes = np.geomspace(30, 600, 6).astype(int)
dim, slopes, _ = scaling_dimension(points, center=np.array([1.25, 0.0, 0.0]), sizes=sizes)
print("scaling slopes", np.round(slopes, 2), "-> dimension", dim)

res = build_bramah(traj, cell_count=4, landmarks=200)
print("betti numbers", betti_numbers(res.complex))
print("digraph edges", res.templex.digraph.edges)
for g in generatex_classes(res.templex):
    print(g, "(trivial)" if g.is_trivial else "")
