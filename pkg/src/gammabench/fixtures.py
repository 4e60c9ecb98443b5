"""Built-in lattice corpus: builders plus the shipped JSON files.

The JSON lattice file is the single source of truth; the builders here
generate exactly the shipped content.  Octahedron star orderings are
arranged so that each vertex's two shaded-face edge pairs sit in the
ordering's pair slots, which makes every shaded constraint word diagonal.
"""

from __future__ import annotations

import json
from importlib import resources

from .torus import TorusSpec
from .z2core import Graph


def bigon() -> Graph:
    """Two vertices joined by a pair of parallel edges, with the disc face."""
    return Graph(2, [(0, 1), (0, 1)], faces=[[0, 1]])


def cycle4() -> Graph:
    """Four-cycle with its single disc face."""
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], faces=[[0, 1, 2, 3]])


def k4() -> Graph:
    """Complete graph on four vertices; every degree odd."""
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def multi3() -> Graph:
    """Three vertices with doubled edges between every pair (all degrees 4)."""
    return Graph(3, [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)])


_OCTA_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4),   # apex 0 to equator
    (1, 2), (2, 3), (3, 4), (4, 1),   # equator ring
    (5, 1), (5, 2), (5, 3), (5, 4),   # apex 5 to equator
]

_OCTA_FACES = [
    [0, 4, 1],    # 0-1-2
    [1, 5, 2],    # 0-2-3
    [2, 6, 3],    # 0-3-4
    [3, 7, 0],    # 0-4-1
    [8, 4, 9],    # 5-1-2
    [9, 5, 10],   # 5-2-3
    [10, 6, 11],  # 5-3-4
    [11, 7, 8],   # 5-4-1
]

# faces 0, 2, 5, 7 pairwise share no edge and cover all twelve edges
OCTA_SHADED = [0, 2, 5, 7]


def _octa_star_orderings() -> dict[int, list[int]]:
    orders: dict[int, list[int]] = {}
    for v in range(6):
        order: list[int] = []
        for f in OCTA_SHADED:
            local = [e for e in _OCTA_FACES[f] if v in _OCTA_EDGES[e]]
            order.extend(local)
        if order:
            orders[v] = order
    return orders


def octahedron() -> Graph:
    """Octahedron surface: 6 vertices of degree 4, 12 edges, 8 triangles."""
    return Graph(6, _OCTA_EDGES, faces=_OCTA_FACES, star_orderings=_octa_star_orderings())


def torus(*sizes: int) -> Graph:
    return TorusSpec(tuple(sizes)).build()


BUILDERS = {
    "bigon": bigon,
    "c4": cycle4,
    "k4": k4,
    "multi3": multi3,
    "octahedron": octahedron,
    "torus_3x3": lambda: torus(3, 3),
    "torus_4x4": lambda: torus(4, 4),
    "torus_4x6": lambda: torus(4, 6),
    "torus_3x3x3": lambda: torus(3, 3, 3),
}


def fixture_names() -> list[str]:
    return sorted(BUILDERS)


def load(name: str) -> Graph:
    """Load a corpus lattice from the shipped JSON file."""
    path = resources.files("gammabench").joinpath(f"fixtures/{name}.json")
    return Graph.from_json(path.read_text())


def write_corpus(directory) -> None:
    """Regenerate the JSON corpus from the builders."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        text = json.dumps(build().to_dict(), indent=1, sort_keys=True)
        (directory / f"{name}.json").write_text(text + "\n")
