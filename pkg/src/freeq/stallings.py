"""Stallings core graphs for finitely generated subgroups of free groups.

Membership, quasiconvexity constants, malnormality (conjugate separation)
and finiteness of intersections with conjugates, all via the folded core
graph and fiber products over the rose.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .words import Alphabet, Word, inverse, mul, free_reduce


@dataclass(frozen=True)
class CoreGraph:
    """Folded basepointed graph; vertices 0..n-1 in canonical BFS order, basepoint 0."""

    alphabet: Alphabet
    num_vertices: int
    edges: tuple  # sorted tuple of (source, generator>=1, target)

    def __post_init__(self):
        out: Dict[Tuple[int, int], int] = {}
        inn: Dict[Tuple[int, int], int] = {}
        for (u, g, v) in self.edges:
            if (u, g) in out or (v, g) in inn:
                raise ValueError("graph is not folded")
            out[(u, g)] = v
            inn[(v, g)] = u
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inn)

    def step(self, vertex: int, letter: int) -> Optional[int]:
        if letter > 0:
            return self._out.get((vertex, letter))
        return self._in.get((vertex, -letter))

    def trace(self, w: Word, start: int = 0) -> Optional[int]:
        v = start
        for x in w:
            v = self.step(v, x)
            if v is None:
                return None
        return v

    @property
    def betti(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    def serialize(self) -> str:
        """Canonical one-line adjacency text (graphs are canonically numbered)."""
        parts = [f"v={self.num_vertices}"]
        for (u, g, v) in self.edges:
            parts.append(f"{u}-{self.alphabet.names[g - 1]}->{v}")
        return " ".join(parts)


def _fold(num_vertices: int, edges: List[Tuple[int, int, int]], basepoint: int):
    """Fold edge list in place (union-find); returns (vertex map, folded edges, basepoint)."""
    parent = list(range(num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    changed = True
    while changed:
        changed = False
        out: Dict[Tuple[int, int], int] = {}
        inn: Dict[Tuple[int, int], int] = {}
        for (u, g, v) in edges:
            u, v = find(u), find(v)
            if (u, g) in out and out[(u, g)] != v:
                union(out[(u, g)], v)
                changed = True
                break
            out[(u, g)] = v
            if (v, g) in inn and inn[(v, g)] != u:
                union(inn[(v, g)], u)
                changed = True
                break
            inn[(v, g)] = u
    folded = sorted({(find(u), g, find(v)) for (u, g, v) in edges})
    return find, folded, find(basepoint)


def _trim(edges, basepoint):
    """Remove non-basepoint vertices of degree 1 (hair)."""
    edges = list(edges)
    while True:
        deg: Dict[int, int] = {}
        for (u, g, v) in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        hair = [x for x, d in deg.items() if d == 1 and x != basepoint]
        if not hair:
            return edges
        edges = [e for e in edges if e[0] not in hair and e[2] not in hair]


def _canonical(alphabet: Alphabet, edges, basepoint) -> CoreGraph:
    """Renumber vertices by BFS from the basepoint with shortlex edge order."""
    out: Dict[Tuple[int, int], int] = {}
    inn: Dict[Tuple[int, int], int] = {}
    for (u, g, v) in edges:
        out[(u, g)] = v
        inn[(v, g)] = u
    order = {basepoint: 0}
    queue = deque([basepoint])
    while queue:
        x = queue.popleft()
        for g in range(1, alphabet.size + 1):
            for nbr in (out.get((x, g)), inn.get((x, g))):
                if nbr is not None and nbr not in order:
                    order[nbr] = len(order)
                    queue.append(nbr)
    new_edges = sorted((order[u], g, order[v]) for (u, g, v) in edges if u in order)
    return CoreGraph(alphabet, max(1, len(order)), tuple(new_edges))


def build_core(alphabet: Alphabet, generators) -> CoreGraph:
    """Folded basepointed core graph of the subgroup generated by the given words."""
    edges: List[Tuple[int, int, int]] = []
    nv = 1
    for w in generators:
        w = free_reduce(w)
        if not w:
            continue
        prev = 0
        for i, x in enumerate(w):
            nxt = 0 if i == len(w) - 1 else nv
            if i < len(w) - 1:
                nv += 1
            if x > 0:
                edges.append((prev, x, nxt))
            else:
                edges.append((nxt, -x, prev))
            prev = nxt
    _, folded, base = _fold(nv, edges, 0)
    folded = _trim(folded, base)
    return _canonical(alphabet, folded, base)


def contains(graph: CoreGraph, w: Word) -> bool:
    return graph.trace(w) == 0


def _spanning_tree(graph: CoreGraph):
    """BFS tree: vertex -> path word from basepoint; plus sorted non-tree edges."""
    path = {0: ()}
    queue = deque([0])
    tree_edges = set()
    while queue:
        x = queue.popleft()
        for g in range(1, graph.alphabet.size + 1):
            v = graph.step(x, g)
            if v is not None and v not in path:
                path[v] = path[x] + (g,)
                tree_edges.add((x, g, v))
                queue.append(v)
            u = graph.step(x, -g)
            if u is not None and u not in path:
                path[u] = path[x] + (-g,)
                tree_edges.add((u, g, x))
                queue.append(u)
    chords = [e for e in graph.edges if e not in tree_edges]
    return path, chords


def free_basis(graph: CoreGraph) -> List[Word]:
    """One free generator per non-tree edge, in deterministic order."""
    path, chords = _spanning_tree(graph)
    return [mul(path[u], (g,), inverse(path[v])) for (u, g, v) in chords]


def express(graph: CoreGraph, w: Word) -> Optional[List[Tuple[int, int]]]:
    """Decompose a subgroup element over the free basis; None if w is not in it.

    Returns a list of (basis index, sign) whose product equals w.
    """
    path, chords = _spanning_tree(graph)
    chord_idx = {e: i for i, e in enumerate(chords)}
    v = 0
    out: List[Tuple[int, int]] = []
    for x in w:
        if x > 0:
            nxt = graph.step(v, x)
            if nxt is None:
                return None
            e = (v, x, nxt)
            if e in chord_idx:
                out.append((chord_idx[e], 1))
        else:
            nxt = graph.step(v, x)
            if nxt is None:
                return None
            e = (nxt, -x, v)
            if e in chord_idx:
                out.append((chord_idx[e], -1))
        v = nxt
    if v != 0:
        return None
    return out


def quasiconvexity_constant(graph: CoreGraph) -> int:
    """Max graph distance from any vertex to the basepoint within the core."""
    dist = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in range(1, graph.alphabet.size + 1):
            for nbr in (graph.step(x, g), graph.step(x, -g)):
                if nbr is not None and nbr not in dist:
                    dist[nbr] = dist[x] + 1
                    queue.append(nbr)
    return max(dist.values())


@dataclass(frozen=True)
class FiberComponent:
    """Connected component of the pullback of two core graphs over the rose."""

    vertices: tuple  # sorted tuple of (p, q) pairs
    edges: tuple  # sorted tuple of ((p,q), g, (p',q'))
    contains_basepoint: bool

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1


def fiber_product(g1: CoreGraph, g2: CoreGraph) -> List[FiberComponent]:
    if g1.alphabet != g2.alphabet:
        raise ValueError("fiber product needs a common alphabet")
    pairs = [(p, q) for p in range(g1.num_vertices) for q in range(g2.num_vertices)]
    parent = {x: x for x in pairs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for (p, q) in pairs:
        for g in range(1, g1.alphabet.size + 1):
            p2, q2 = g1.step(p, g), g2.step(q, g)
            if p2 is not None and q2 is not None:
                edges.append(((p, q), g, (p2, q2)))
                ra, rb = find((p, q)), find((p2, q2))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    comp_vertices: Dict[Tuple[int, int], list] = {}
    for x in pairs:
        comp_vertices.setdefault(find(x), []).append(x)
    comp_edges: Dict[Tuple[int, int], list] = {r: [] for r in comp_vertices}
    for e in edges:
        comp_edges[find(e[0])].append(e)
    out = []
    for root in sorted(comp_vertices):
        out.append(
            FiberComponent(
                vertices=tuple(sorted(comp_vertices[root])),
                edges=tuple(sorted(comp_edges[root])),
                contains_basepoint=(0, 0) in comp_vertices[root],
            )
        )
    return out


def _component_loop(comp: FiberComponent, at) -> Optional[Word]:
    """A nontrivial reduced loop at `at` inside the component, if betti >= 1."""
    tree_path = {at: ()}
    tree = set()
    queue = deque([at])
    step_out = {}
    step_in = {}
    for (u, g, v) in comp.edges:
        step_out[(u, g)] = v
        step_in[(v, g)] = u
    gens = sorted({g for (_, g, _) in comp.edges})
    while queue:
        x = queue.popleft()
        for g in gens:
            v = step_out.get((x, g))
            if v is not None and v not in tree_path:
                tree_path[v] = tree_path[x] + (g,)
                tree.add((x, g, v))
                queue.append(v)
            u = step_in.get((x, g))
            if u is not None and u not in tree_path:
                tree_path[u] = tree_path[x] + (-g,)
                tree.add((u, g, x))
                queue.append(u)
    for e in comp.edges:
        if e not in tree:
            (u, g, v) = e
            return mul(tree_path[u], (g,), inverse(tree_path[v]))
    return None


def _vertex_path(graph: CoreGraph, vertex: int) -> Word:
    path, _ = _spanning_tree(graph)
    return path[vertex]


@dataclass(frozen=True)
class SeparationResult:
    """Outcome of a finiteness test, with a verifying witness on failure."""

    holds: bool
    witness: Optional[Word] = None  # x (or g) conjugating a common element
    common_element: Optional[Word] = None

    def __bool__(self):
        return self.holds


def is_conjugate_separated(graph: CoreGraph) -> SeparationResult:
    """Malnormality of U in the ambient free group (finite = trivial, torsion-free).

    True iff every off-diagonal component of the self fiber product is a tree.
    On failure returns x not in U and a nontrivial u in U with u^x in U.
    """
    for comp in fiber_product(graph, graph):
        if comp.contains_basepoint or comp.betti == 0:
            continue
        (p, q) = comp.vertices[0]
        alpha = _vertex_path(graph, p)
        beta = _vertex_path(graph, q)
        z = _component_loop(comp, (p, q))
        x = mul(alpha, inverse(beta))
        u = mul(alpha, z, inverse(alpha))
        return SeparationResult(False, witness=x, common_element=u)
    return SeparationResult(True)


def conjugate_intersections_finite(gU: CoreGraph, gV: CoreGraph) -> SeparationResult:
    """True iff U \\cap g^-1 V g is trivial for all g (every fiber component a tree).

    On failure returns g and a nontrivial common element of U and g^-1 V g.
    """
    for comp in fiber_product(gU, gV):
        if comp.betti == 0:
            continue
        (p, q) = comp.vertices[0]
        alpha = _vertex_path(gU, p)
        beta = _vertex_path(gV, q)
        z = _component_loop(comp, (p, q))
        g = mul(beta, inverse(alpha))
        u = mul(alpha, z, inverse(alpha))
        return SeparationResult(False, witness=g, common_element=u)
    return SeparationResult(True)
