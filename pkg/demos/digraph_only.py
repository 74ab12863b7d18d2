"""
Digraph-only templexes: speech and a double gyre
================================================

Without a cell complex the Poincaré edges are read off the digraph: every
edge into a node with two or more predecessors. Orientation stays unknown.
"""

from templexkit.fixtures import gyre_templex, speech_templex
from templexkit.genex import bonds, generatex_classes, multigraph_view, pushout_report

for name, T in (("speech", speech_templex()), ("gyre", gyre_templex())):
    classes = generatex_classes(T)
    print(f"--- {name}: {len(classes)} classes")
    for g in classes:
        print(" ", g)
    for b in bonds(classes):
        exclusive = ", ".join(str(p) for p in b.exclusive_paths())
        print(f"  {b}  exclusive: {exclusive}")
    mg = multigraph_view(classes)
    busiest = max(set((u, v) for u, v, _ in mg.edges), key=lambda e: mg.parallel(*e))
    print("  most parallel edge:", busiest, "x", mg.parallel(*busiest))

# the three speech classes glue along one common path
classes = generatex_classes(speech_templex())
rep = pushout_report(bonds(classes)[0], classes)
print(rep["full"]["pushout"])
