"""Reference checks over the shipped fixtures.

Each check compares a computed value with a reference one and records both,
so a failure shows exactly what drifted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

from .cellcomplex import load_complex
from .errors import TemplexError
from .fixtures import SURFACES, TEMPLEXES, load_fixture
from .genex import bonds, generatex_classes
from .homology import betti_table, homology_ranks
from .templex import load_templex

TABLE_ROWS = {
    "sphere": (1, 0, 1, "Orientable"),
    "cylinder": (1, 1, 0, "Orientable"),
    "mobius": (1, 1, 0, "Non-orientable"),
    "torus": (1, 2, 1, "Orientable"),
    "klein": (1, 1, 0, "Non-orientable"),
}

# expected P-images as sets of ⟨in|out⟩ lists (cyclic order is irrelevant
# for these, every multi-edge image has a single rotation class here)
P_IMAGES = {
    "rossler": [["3|1"], ["4|1"]],
    "lorenz": [["3|1"], ["7|5"], ["4|5", "8|1"]],
    "speech": [["21|15", "16|7"], ["14|15", "16|7"], ["6|7"]],
    "gyre": [["4|1"], ["22|1"], ["13|1"], ["8|1"], ["11|1"], ["16|1"]],
}

SPEECH_RINGS = [
    "7→17→9→18→20→21→15→16→7",
    "7→17→9→10→11→13→14→15→16→7",
    "1→2→3→4→5→6→7→17→9→22→23→25→19→12→1",
]


@dataclass
class CheckResult:
    name: str
    fixture: str
    passed: bool
    expected: object
    actual: object

    def to_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}"
        if not self.passed:
            text += f"\n    expected: {self.expected}\n    actual:   {self.actual}"
        return text


def _ring(text: str) -> tuple:
    """Cycle string as a rotation-free key (minimal rotation of its nodes)."""
    nodes = text.split("→")[:-1]
    return min(tuple(nodes[i:] + nodes[:i]) for i in range(len(nodes)))


def _pimages(classes) -> list:
    return sorted(sorted(f"{a}|{b}" for a, b in g.signature.pairs) for g in classes)


def _bond_table(classes, exclusive_for=()) -> dict:
    out = {}
    for b in bonds(classes):
        paths = b.exclusive_paths() if b.indices in exclusive_for else b.shared_paths()
        out[b.label] = ([str(p) for p in paths], b.valence)
    return out


def _surface_checks(name, load):
    K = load(name)
    bt = betti_table(K)
    yield "table row", TABLE_ROWS[name], bt.row()
    if name == "klein":
        yield "H1 torsion", (2,), homology_ranks(K)[1][1]


def _rossler_checks(load):
    T = load("rossler")
    b, _ = homology_ranks(T.complex)
    yield "homology", (1, 1, 0), tuple(b) + (0,) * (3 - len(b))
    cls = generatex_classes(T)
    yield "class count", 2, len(cls)
    yield "P-images", sorted(sorted(p) for p in P_IMAGES["rossler"]), _pimages(cls)
    yield "bonds", {"B12": (["1→2"], 2)}, _bond_table(cls)
    yield "orientations", ["preserving", "reversing"], [g.orientation for g in cls]


def _lorenz_checks(load):
    T = load("lorenz")
    b, _ = homology_ranks(T.complex)
    yield "homology", (1, 2, 0), tuple(b) + (0,) * (3 - len(b))
    cls = generatex_classes(T)
    yield "class count", 3, len(cls)
    yield "P-images", sorted(sorted(p) for p in P_IMAGES["lorenz"]), _pimages(cls)
    yield "bonds", {"B13": (["1→2"], 2), "B23": (["5→6"], 2)}, _bond_table(cls)
    yield "orientations", ["preserving"] * 3, [g.orientation for g in cls]
    g3 = [g for g in cls if len(g.signature) == 2]
    yield "order-2 class", (2, 2), (g3[0].order, len(g3[0].stripexes)) if g3 else None


def _speech_checks(load):
    T = load("speech")
    cls = generatex_classes(T)
    yield "class count", 3, len(cls)
    got = sorted(_ring(str(g.representative)) for g in cls)
    yield "cycles", sorted(_ring(c) for c in SPEECH_RINGS), got
    yield "P-images", sorted(sorted(p) for p in P_IMAGES["speech"]), _pimages(cls)
    pair = tuple(sorted(g.index for g in cls if "16|7" in [f"{a}|{b}" for a, b in g.signature.pairs]))
    table = _bond_table(cls, exclusive_for=(pair,))
    got = {("all" if v[1] == 3 else "pair"): v for v in table.values()}
    yield "bonds", {"all": (["7→17→9"], 3), "pair": (["15→16→7"], 2)}, got
    yield "orientations", ["unknown"] * 3, [g.orientation for g in cls]


def _gyre_checks(load):
    T = load("gyre")
    cls = generatex_classes(T)
    yield "class count", 6, len(cls)
    yield "P-images", sorted(sorted(p) for p in P_IMAGES["gyre"]), _pimages(cls)
    got = sorted((v[1], v[0]) for v in _bond_table(cls).values())
    yield "bonds", [(5, ["1→2→3→5→6"]), (6, ["1→2→3"])], got


CHECKS: dict[str, Callable] = {name: (lambda load, n=name: _surface_checks(n, load)) for name in SURFACES}
CHECKS.update(rossler=_rossler_checks, lorenz=_lorenz_checks, speech=_speech_checks, gyre=_gyre_checks)


def _loader(directory):
    if directory is None:
        return load_fixture
    directory = Path(directory)

    def load(name):
        path = directory / f"{name}.json"
        return load_templex(path) if name in TEMPLEXES else load_complex(path)
    return load


def run_checks(filter: str | None = None, directory=None) -> list[CheckResult]:
    """Run every fixture check whose fixture name contains ``filter``.

    Fixtures come from the package data, or from ``directory`` when given.

    Errors raised while loading or analysing a fixture become failed results.
    """
    load = _loader(directory)
    results = []
    for fixture, gen in CHECKS.items():
        if filter and filter not in fixture:
            continue
        try:
            for name, expected, actual in gen(load):
                results.append(CheckResult(f"{fixture}: {name}", fixture, expected == actual, expected, actual))
        except (TemplexError, OSError, ValueError, KeyError) as exc:
            results.append(CheckResult(f"{fixture}: load", fixture, False, "fixture analyses cleanly",
                                       f"{type(exc).__name__}: {exc}"))
    return results
