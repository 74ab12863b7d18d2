"""Plain-data analysis reports shared by the command line and the demos."""

from __future__ import annotations

from .cellcomplex import CellComplex
from .genex import bonds, generatex_classes
from .homology import homology, orientability_report
from .templex import Templex, junction_loci, poincare_edges
from .tmv import Itinerary, label_trajectory, tmv_stats, transition_matrix


def homology_report(K: CellComplex, generators: bool = False) -> dict:
    groups = homology(K)
    rep = orientability_report(K) if K.dimension >= 1 else None
    out = {
        "betti": [h.betti for h in groups],
        "torsion": [list(h.torsion) for h in groups],
        "groups": [str(h) for h in groups],
        "orientable": None if rep is None else rep.orientable,
    }
    if rep is not None and rep.witness is not None:
        out["witness"] = rep.witness
    if generators:
        out["generators"] = [[str(c) for c in h.generators] for h in groups]
        out["torsion_generators"] = [[str(c) for c in h.torsion_generators] for h in groups]
    return out


def templex_report(T: Templex) -> dict:
    out = {
        "nodes": list(T.digraph.nodes),
        "edges": [list(e) for e in T.digraph.edges],
        "mode": "complex" if T.has_complex else "digraph",
    }
    if T.has_complex:
        out["loci"] = [
            {"cells": list(L.cells), "kind": L.kind,
             "ingoing": sorted(L.ingoing, key=_nk), "outgoing": sorted(L.outgoing, key=_nk),
             "incident": sorted(L.incident, key=_nk)}
            for L in junction_loci(T)
        ]
    out["poincare_edges"] = [str(e) for e in poincare_edges(T)]
    return out


def _nk(label):
    from .templex import natural_key
    return natural_key(label)


def genex_report(T: Templex, cap: int | None = None, all_subsets: bool = False, classes=None) -> dict:
    if classes is None:
        classes = generatex_classes(T, cap) if len(T.digraph) else []
    bs = bonds(classes, all_subsets=all_subsets)
    return {
        "classes": [
            {"index": g.index, "label": g.label, "cycle": str(g.representative),
             "members": [str(m) for m in g.members], "signature": str(g.signature),
             "order": g.order, "stripexes": [str(s) for s in g.stripexes], "orientation": g.orientation}
            for g in classes
        ],
        "bonds": [
            {"label": b.label, "indices": list(b.indices), "valence": b.valence,
             "shared": [str(p) for p in b.shared_paths()],
             "exclusive": [str(p) for p in b.exclusive_paths()]}
            for b in bs
        ],
    }


def tmv_report(T: Templex, it: Itinerary, classes) -> dict:
    d = label_trajectory(it, T, classes)
    st = tmv_stats(d)
    return {
        "intervals": [[iv.start, iv.end, iv.label] for iv in d.intervals],
        "sigma": list(d.sigma),
        "labels": list(d.labels),
        "counts": {str(k): v for k, v in st.counts.items()},
        "totals": {str(k): v for k, v in st.totals.items()},
        "means": {str(k): v for k, v in st.means.items()},
        "transitions": transition_matrix(d).tolist(),
        "repaired_jumps": len(d.repaired),
    }


def analysis_report(T: Templex, it: Itinerary | None = None, cap: int | None = None) -> dict:
    classes = generatex_classes(T, cap) if len(T.digraph) else []
    out = {"templex": templex_report(T)}
    if T.has_complex:
        out["homology"] = homology_report(T.complex)
    out.update(genex_report(T, classes=classes))
    if it is not None:
        out["tmv"] = tmv_report(T, it, classes)
    return out


def render_text(report: dict) -> str:
    """Human-readable rendering of :func:`analysis_report` (or any part of it)."""
    lines = []
    h = report.get("homology") or (report if "betti" in report else None)
    if h:
        lines.append("homology: " + ", ".join(f"H{k} = {g}" for k, g in enumerate(h["groups"])))
        lines.append(f"betti: {tuple(h['betti'])}")
        if h.get("orientable") is not None:
            lines.append("orientable" if h["orientable"] else "non-orientable")
        for k, gens in enumerate(h.get("generators", [])):
            for c in gens:
                lines.append(f"  H{k} generator: {c}")
    t = report.get("templex") or (report if "nodes" in report else None)
    if t:
        lines.append(f"digraph: {len(t['nodes'])} nodes, {len(t['edges'])} edges ({t['mode']} mode)")
        for L in t.get("loci", []):
            lines.append(f"  locus {{{', '.join(L['cells'])}}} {L['kind']}: "
                         f"in {{{', '.join(L['ingoing'])}}} -> out {{{', '.join(L['outgoing'])}}}")
        lines.append("Poincaré edges: " + (", ".join(t["poincare_edges"]) or "none"))
    if "classes" in report:
        lines.append(f"generatex classes: {len(report['classes'])}")
        for g in report["classes"]:
            lines.append(f"  {g['label']} = {{{g['cycle']}}}  P = {g['signature']}  "
                         f"order {g['order']}  {g['orientation']}")
            if g["order"] > 1:
                for s in g["stripexes"]:
                    lines.append(f"      stripex {s}")
        for b in report.get("bonds", []):
            lines.append(f"  {b['label']} = {{{'; '.join(b['shared'])}}}  valence {b['valence']}")
    m = report.get("tmv")
    if m:
        lines.append(f"TMV intervals: {len(m['intervals'])}")
        for lab in m["labels"]:
            k = str(lab)
            lines.append(f"  G{lab}: visits {m['counts'][k]}, total {m['totals'][k]:.6g}, mean {m['means'][k]:.6g}")
        lines.append("transitions (row = from):")
        for lab, row in zip(m["labels"], m["transitions"]):
            lines.append(f"  G{lab}: " + " ".join(f"{v:4d}" for v in row))
    return "\n".join(lines)
