"""Quivers on [n], cocomposition, external connectivity, and the line basis.

The quotient of the free span of loop-free n-quivers by the cycle relations
(cyclic quivers vanish; for each directed cycle, the edge-removal sum
vanishes) has the disjoint unions of lines as a basis.  reduce_quiver
rewrites any quiver into that basis:

  * a quiver whose underlying multigraph has a cycle is 0;
  * reversing one edge flips the sign (the 2-cycle relation);
  * a branch at a vertex is resolved by the 3-cycle relation, which rehomes
    one of two sibling edges to the other sibling.

The rewriting walks a spine from the component minimum outward, so every
step either extends the spine or lowers the degree at its tip; termination
is structural and results are memoized per component tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .core import Perm

LinePartition = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Quiver:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for s, t in self.edges:
            if s == t:
                raise ValueError("loops are not allowed")
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise ValueError("edge endpoint outside vertex range")
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))


def components(Q: Quiver) -> tuple[tuple[int, ...], ...]:
    parent = list(range(Q.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in Q.edges:
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rs] = rt
    groups: dict[int, list[int]] = {}
    for v in range(1, Q.n + 1):
        groups.setdefault(find(v), []).append(v)
    return tuple(
        sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0])
    )


def is_acyclic(Q: Quiver) -> bool:
    """Acyclicity of the underlying multigraph; parallel edges form a 2-cycle."""
    parent = list(range(Q.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in Q.edges:
        rs, rt = find(s), find(t)
        if rs == rt:
            return False
        parent[rs] = rt
    return True


def act_quiver(sigma: Perm, Q: Quiver) -> Quiver:
    """Relabel endpoints by the permutation (0-based on slots 1..n)."""
    return Quiver(Q.n, tuple((sigma[s - 1] + 1, sigma[t - 1] + 1) for s, t in Q.edges))


def line_quiver(L: LinePartition, n: int) -> Quiver:
    edges = []
    for block in L:
        for a, b in zip(block, block[1:]):
            edges.append((a, b))
    return Quiver(n, tuple(edges))


def line_partitions(n: int) -> list[LinePartition]:
    """All disjoint unions of lines: blocks start at their minima, ordered by minima."""
    if n == 0:
        return [()]
    out: list[LinePartition] = []

    def rec(remaining: tuple[int, ...], acc: list[tuple[int, ...]]):
        if not remaining:
            out.append(tuple(acc))
            return
        head = remaining[0]
        rest = remaining[1:]
        for r in range(len(rest) + 1):
            for tail_set in _combinations(rest, r):
                leftover = tuple(x for x in rest if x not in tail_set)
                for tail in permutations(tail_set):
                    rec(leftover, acc + [(head,) + tail])

    rec(tuple(range(1, n + 1)), [])
    return sorted(out)


def _combinations(seq, r):
    from itertools import combinations

    return combinations(seq, r)


def blocks_count(L: LinePartition) -> int:
    return len(L)


_TREE_MEMO: dict[frozenset, dict[tuple[int, ...], Fraction]] = {}


def _reduce_component_tree(edges: frozenset[tuple[int, int]]) -> dict[tuple[int, ...], Fraction]:
    """Reduce one canonically oriented tree to head-first path sequences.

    Edges are stored as (min, max); the value maps each vertex sequence
    (starting at the component minimum) to its coefficient, where the
    sequence stands for the directed path along it.
    """
    if edges in _TREE_MEMO:
        return _TREE_MEMO[edges]
    vertices = sorted({v for e in edges for v in e})
    h = vertices[0]
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    # walk the spine from h until a branch point or the far end
    spine = [h]
    prev = None
    cur = h
    branch = None
    while True:
        nxt = [u for u in adj[cur] if u != prev]
        if not nxt:
            break
        if len(nxt) > 1:
            branch = cur
            break
        prev, cur = cur, nxt[0]
        spine.append(cur)

    if branch is None:
        # a bare path from h; translate directed reading into canonical signs
        sign = 1
        for a, b in zip(spine, spine[1:]):
            if a > b:
                sign = -sign
        result = {tuple(spine): Fraction(sign)}
        _TREE_MEMO[edges] = result
        return result

    y = branch
    off_spine = sorted(u for u in adj[y] if u != (spine[spine.index(y) - 1] if y != h else None))
    x, z = off_spine[0], off_spine[1]

    def csign(u, v):
        return 1 if u < v else -1

    def cedge(u, v):
        return (u, v) if u < v else (v, u)

    # 3-cycle relation: [T] = -cs(z,x)cs(x,y)[T with x rehomed to z]
    #                        - cs(z,x)cs(y,z)[T with z rehomed to x]
    t1 = frozenset(edges - {cedge(x, y)} | {cedge(x, z)})
    t2 = frozenset(edges - {cedge(y, z)} | {cedge(x, z)})
    out: dict[tuple[int, ...], Fraction] = {}
    for tree, coeff in ((t1, Fraction(-csign(z, x) * csign(x, y))), (t2, Fraction(-csign(z, x) * csign(y, z)))):
        if len(tree) < len(edges):
            continue  # rehomed edge already present: parallel pair, cycle, 0
        for line, c in _reduce_component_tree(tree).items():
            out[line] = out.get(line, Fraction(0)) + coeff * c
            if not out[line]:
                del out[line]
    _TREE_MEMO[edges] = out
    return out


def reduce_quiver(Q: Quiver) -> dict[LinePartition, Fraction]:
    """Coordinates of Q in the line basis modulo the cycle relations."""
    if not is_acyclic(Q):
        return {}
    sign = 1
    comp_edges: dict[int, set[tuple[int, int]]] = {}
    comp_of: dict[int, int] = {}
    comps = components(Q)
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
        comp_edges[ci] = set()
    for s, t in Q.edges:
        if s > t:
            sign = -sign
        comp_edges[comp_of[s]].add((min(s, t), max(s, t)))

    partials: list[dict[tuple[int, ...], Fraction]] = []
    for ci, comp in enumerate(comps):
        if len(comp) == 1:
            partials.append({(comp[0],): Fraction(1)})
        else:
            partials.append(_reduce_component_tree(frozenset(comp_edges[ci])))

    out: dict[LinePartition, Fraction] = {}

    def rec(i: int, acc: list[tuple[int, ...]], coeff: Fraction):
        if i == len(partials):
            L = tuple(sorted(acc, key=lambda b: b[0]))
            out[L] = out.get(L, Fraction(0)) + coeff
            if not out[L]:
                del out[L]
            return
        for line, c in partials[i].items():
            rec(i + 1, acc + [line], coeff * c)

    rec(0, [], Fraction(sign))
    return out


def reduce_combination(comb: dict[Quiver, Fraction]) -> dict[LinePartition, Fraction]:
    out: dict[LinePartition, Fraction] = {}
    for Q, c in comb.items():
        for L, v in reduce_quiver(Q).items():
            out[L] = out.get(L, Fraction(0)) + c * v
            if not out[L]:
                del out[L]
    return out


def block_ranges(nu: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    """Half-open 1-based vertex ranges of each block."""
    out = []
    start = 1
    for m in nu:
        out.append((start, start + m))
        start += m
    return tuple(out)


def block_of_vertex(nu: tuple[int, ...], v: int) -> int:
    """1-based block index containing vertex v."""
    for j, (a, b) in enumerate(block_ranges(nu), start=1):
        if a <= v < b:
            return j
    raise ValueError(f"vertex {v} outside the composition")


def cocompose(nu: tuple[int, ...], Q: Quiver) -> tuple[Quiver, list[Quiver]]:
    """Split Q along the composition: collapsed quiver plus block subquivers."""
    if sum(nu) != Q.n:
        raise ValueError("composition does not sum to the vertex count")
    ranges = block_ranges(nu)
    inner: list[list[tuple[int, int]]] = [[] for _ in nu]
    outer: list[tuple[int, int]] = []
    for s, t in Q.edges:
        bs, bt = block_of_vertex(nu, s), block_of_vertex(nu, t)
        if bs == bt:
            a = ranges[bs - 1][0]
            inner[bs - 1].append((s - a + 1, t - a + 1))
        else:
            outer.append((bs, bt))
    delta0 = Quiver(len(nu), tuple(outer))
    deltas = [Quiver(m, tuple(es)) for m, es in zip(nu, inner)]
    return delta0, deltas


def externally_connected(nu: tuple[int, ...], Q: Quiver, j: int) -> tuple[int, ...]:
    """Block indices joined to vertex j by an edge-simple collapsed walk.

    A walk in the underlying collapsed quiver with pairwise-distinct edges,
    from a block to the block of j, counts when at least one traversed edge
    has j as an endpoint in the original quiver.  Returns the sorted tuple of
    starting blocks admitting such a walk.
    """
    target = block_of_vertex(nu, j)
    cross = []
    for s, t in Q.edges:
        bs, bt = block_of_vertex(nu, s), block_of_vertex(nu, t)
        if bs != bt:
            cross.append((bs, bt, s, t))
    m = len(nu)
    good_blocks = set()
    for start in range(1, m + 1):
        found = False
        stack = [(start, frozenset(), False)]
        seen = set()
        while stack and not found:
            v, used, touched = stack.pop()
            state = (v, used, touched)
            if state in seen:
                continue
            seen.add(state)
            if v == target and touched:
                found = True
                break
            for idx, (bs, bt, s, t) in enumerate(cross):
                if idx in used:
                    continue
                if bs == v:
                    w = bt
                elif bt == v:
                    w = bs
                else:
                    continue
                stack.append((w, used | {idx}, touched or s == j or t == j))
        if found:
            good_blocks.add(start)
    return tuple(sorted(good_blocks))


def parse_quiver(text: str) -> Quiver:
    """Literal `n; s1>t1, s2>t2, ...` with 1-based vertices; edges optional."""
    head, _, tail = text.partition(";")
    try:
        n = int(head.strip())
    except ValueError:
        raise ValueError(f"bad vertex count {head.strip()!r}") from None
    edges = []
    tail = tail.strip()
    if tail:
        for part in tail.split(","):
            s, _, t = part.partition(">")
            try:
                edges.append((int(s.strip()), int(t.strip())))
            except ValueError:
                raise ValueError(f"bad edge {part.strip()!r}") from None
    return Quiver(n, tuple(edges))


def format_line_partition(L: LinePartition) -> str:
    return " | ".join(">".join(str(v) for v in block) for block in L)


def format_quiver(Q: Quiver) -> str:
    if not Q.edges:
        return f"{Q.n};"
    return f"{Q.n}; " + ", ".join(f"{s}>{t}" for s, t in Q.edges)
