"""Binary tries built by recursive bit splitting.

No path compression: a run of keys sharing a bit produces a chain of unary
internal nodes, so every edge counts in distances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bitkeys import Key, lcp
from .errors import DepthCapExceeded, DomainError, IndistinguishableKeysError, InsufficientBitsError

DEFAULT_DEPTH_CAP = 4096


@dataclass(eq=False)
class Node:
    depth: int
    parent: "Node | None" = None
    left: "Node | None" = None
    right: "Node | None" = None
    key: int | None = None  # set on leaves only

    @property
    def is_leaf(self) -> bool:
        return self.key is not None


@dataclass(eq=False)
class Trie:
    root: Node | None
    key_count: int
    leaves: dict[int, Node] = field(default_factory=dict)

    def depth(self, i: int) -> int:
        return self._leaf(i).depth

    def depths(self) -> list[int]:
        return [self.leaves[i].depth for i in range(self.key_count)]

    def _leaf(self, i: int) -> Node:
        try:
            return self.leaves[i]
        except KeyError:
            raise IndexError(f"no key with index {i} (n = {self.key_count})") from None

    def internal_nodes(self):
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            yield node
            stack.extend(c for c in (node.left, node.right) if c is not None)


def build_trie(keys: list[Key], depth_cap: int = DEFAULT_DEPTH_CAP) -> Trie:
    """Insert ``keys`` (indexed by position) into a fresh trie."""
    n = len(keys)
    if n == 0:
        return Trie(root=None, key_count=0)
    trie = Trie(root=None, key_count=n)
    root = Node(depth=0)
    trie.root = root
    stack = [(root, list(range(n)))]
    while stack:
        node, members = stack.pop()
        if len(members) == 1:
            node.key = members[0]
            trie.leaves[members[0]] = node
            continue
        if node.depth >= depth_cap:
            raise DepthCapExceeded(
                f"depth cap {depth_cap} reached with {len(members)} keys still together")
        level = node.depth
        try:
            zeros = [m for m in members if keys[m].bit(level) == 0]
        except InsufficientBitsError as exc:
            raise IndistinguishableKeysError(
                f"undistinguishable fixed keys among {sorted(members)}") from exc
        zero_set = set(zeros)
        ones = [m for m in members if m not in zero_set]
        if zeros:
            node.left = Node(depth=level + 1, parent=node)
            stack.append((node.left, zeros))
        if ones:
            node.right = Node(depth=level + 1, parent=node)
            stack.append((node.right, ones))
    return trie


def distance(trie: Trie, i: int, j: int) -> int:
    """Number of edges on the path between the leaves of keys i and j."""
    a, b = trie._leaf(i), trie._leaf(j)
    steps = 0
    while a is not b:
        if a.depth >= b.depth:
            a = a.parent
        else:
            b = b.parent
        steps += 1
    return steps


def lca_depth(trie: Trie, i: int, j: int) -> int:
    a, b = trie._leaf(i), trie._leaf(j)
    while a is not b:
        if a.depth >= b.depth:
            a = a.parent
        else:
            b = b.parent
    return a.depth


def wiener_index(trie: Trie) -> int:
    """Sum of pairwise leaf distances.

    Each edge above a subtree with s leaves lies on s * (n - s) paths.
    """
    n = trie.key_count
    if trie.root is None:
        return 0
    # post-order leaf counts
    order = []
    stack = [trie.root]
    while stack:
        node = stack.pop()
        order.append(node)
        if not node.is_leaf:
            stack.extend(c for c in (node.left, node.right) if c is not None)
    size: dict[int, int] = {}
    total = 0
    for node in reversed(order):
        if node.is_leaf:
            s = 1
        else:
            s = sum(size[id(c)] for c in (node.left, node.right) if c is not None)
        size[id(node)] = s
        if node.parent is not None:
            total += s * (n - s)
    return total


def pairwise_distances_bruteforce(keys: list[Key]) -> dict[tuple[int, int], int]:
    """Distances from key bits alone, via depth(i) = 1 + max_j lcp(i, j)."""
    n = len(keys)
    if n < 2:
        return {}
    pref = [[lcp(keys[i], keys[j]) if i != j else -1 for j in range(n)] for i in range(n)]
    depth = [1 + max(row) for row in pref]
    return {(i, j): depth[i] + depth[j] - 2 * pref[i][j]
            for i in range(n) for j in range(i + 1, n)}


def complete_trie_stats(h: int) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of the distance between a uniform random
    unordered pair of leaves in the complete trie with 2**h leaves.

    A pair whose lowest common ancestor sits at depth k is at distance
    2(h - k); there are 2**k * 4**(h - k - 1) such pairs.
    """
    if h < 1:
        raise DomainError("complete trie needs height h >= 1")
    pairs = Fraction(2**h * (2**h - 1), 2)
    m1 = m2 = Fraction(0)
    for k in range(h):
        count = 2**k * 4 ** (h - k - 1)
        d = 2 * (h - k)
        m1 += count * d
        m2 += count * d * d
    mean = m1 / pairs
    return mean, m2 / pairs - mean * mean
