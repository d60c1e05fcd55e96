"""Independent brute-force oracles used to compute expected test values.

Everything here works from plain outcome strings, sets, and Fractions, with
no bitsets and none of the library's indexing or kernels, so a library bug
cannot hide in its own oracle.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def split_of(rows: list[str], members: list[int], x: int) -> Fraction:
    ones = sum(1 for h in members if rows[h][x] == "1")
    p = Fraction(ones, len(members))
    return min(p, 1 - p)


def p_one_of(rows: list[str], members: list[int], x: int) -> Fraction:
    return Fraction(sum(1 for h in members if rows[h][x] == "1"), len(members))


def best_split(rows: list[str], members: list[int]) -> tuple[int, Fraction]:
    m_tests = len(rows[0])
    best_x, best_value = 0, Fraction(-1)
    for x in range(m_tests):
        value = split_of(rows, members, x)
        if value > best_value:
            best_x, best_value = x, value
    return best_x, best_value


def delta_members(rows: list[str], x: int, x_prime: int) -> list[int]:
    return [h for h in range(len(rows)) if rows[h][x] == "0" and rows[h][x_prime] == "1"]


def min_subset_split(rows: list[str], pool: list[int]) -> Fraction:
    """Minimum over subsets of pool (size >= 2) of the best split any test gives."""
    worst = Fraction(1, 2)
    for size in range(2, len(pool) + 1):
        for subset in itertools.combinations(pool, size):
            worst = min(worst, best_split(rows, list(subset))[1])
    return worst


def disagreement_count(rows: list[str], i: int, j: int) -> int:
    return sum(1 for row in rows if row[i] != row[j])


def connected_at_threshold(rows: list[str], k: int) -> bool:
    """Is the graph with edges 'disagreement <= k' connected?  Plain BFS."""
    m = len(rows[0])
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(m):
            if j not in seen and disagreement_count(rows, i, j) <= k:
                seen.add(j)
                frontier.append(j)
    return len(seen) == m


def strongly_connected(n_nodes: int, edges: list[tuple[int, int]]) -> bool:
    """Reachability closure from every node (deliberately not the library's method)."""
    adjacency = {i: set() for i in range(n_nodes)}
    for a, b in edges:
        adjacency[a].add(b)
    for start in range(n_nodes):
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if len(seen) != n_nodes:
            return False
    return True


def optimal_tree_depth(rows: list[str], members: frozenset[int], memo=None) -> int:
    """Exact optimal worst-case depth via frozenset recursion (no bitmasks)."""
    if memo is None:
        memo = {}
    if len(members) == 1:
        return 0
    if members in memo:
        return memo[members]
    m_tests = len(rows[0])
    best = None
    for x in range(m_tests):
        yes = frozenset(h for h in members if rows[h][x] == "1")
        no = members - yes
        if not yes or not no:
            continue
        depth = 1 + max(
            optimal_tree_depth(rows, yes, memo), optimal_tree_depth(rows, no, memo)
        )
        if best is None or depth < best:
            best = depth
    memo[members] = best
    return best


def expected_outcome(rows: list[str], weights: dict[int, Fraction], h: int) -> Fraction:
    return sum((w for x, w in weights.items() if rows[h][x] == "1"), Fraction(0))


def certificate_value(rows: list[str], weights: dict[int, Fraction]) -> Fraction:
    worst = Fraction(1, 2)
    for h in range(len(rows)):
        e = expected_outcome(rows, weights, h)
        worst = min(worst, e, 1 - e)
    return worst


def count_arcs_containing(m: int, lengths: range, vertex: int, excluded: int) -> int:
    """Contiguous arcs on an m-cycle (lengths drawn from `lengths`) that contain
    `vertex` but not `excluded`."""
    count = 0
    for start in range(m):
        for length in lengths:
            arc = {(start + offset) % m for offset in range(length)}
            if vertex in arc and excluded not in arc:
                count += 1
    return count
