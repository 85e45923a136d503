"""Recursive constructors for the memory structures and reference graphs.

Every structure is a rooted spanning tree, optionally decorated with
sibling bonds (two children of the same parent coupled to each other,
closing a triangle with the parent). Node ids are assigned in construction
order with the root at 0.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable


class Kind(str, enum.Enum):
    S1 = "s1"
    S2 = "s2"
    S3 = "s3"
    S4 = "s4"
    CANONICAL = "canonical"
    LINE = "line"
    STAR = "star"

    @classmethod
    def parse(cls, value: "str | Kind") -> "Kind":
        if isinstance(value, Kind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown structure kind {value!r} (expected one of {names})") from None


HIERARCHICAL = (Kind.S1, Kind.S2, Kind.S3, Kind.S4, Kind.CANONICAL)


@dataclass(frozen=True)
class StructureSpec:
    """Which structure family to build and how large.

    For the hierarchical families ``level`` is the concatenation level k and
    the size is ``3**level``. For ``line`` and ``star`` give ``size``.
    """

    kind: Kind
    level: int | None = None
    size: int | None = None

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in HIERARCHICAL:
            if self.level is None:
                raise ValueError(f"{kind.value} needs a concatenation level")
            if self.level < 0:
                raise ValueError(f"level must be non-negative, got {self.level}")
            if self.size is not None and self.size != 3**self.level:
                raise ValueError(f"{kind.value} size is fixed to 3**level")
        else:
            if self.size is None and self.level is not None:
                if self.level < 0:
                    raise ValueError(f"level must be non-negative, got {self.level}")
                object.__setattr__(self, "size", 3**self.level)
            if self.size is None or self.size < 1:
                raise ValueError(f"{kind.value} needs size >= 1, got {self.size}")

    @property
    def n_spins(self) -> int:
        if self.kind in HIERARCHICAL:
            return 3**self.level
        return self.size

    def label(self) -> str:
        if self.kind in HIERARCHICAL:
            return f"{self.kind.value}(k={self.level})"
        return f"{self.kind.value}(N={self.size})"


@dataclass(frozen=True)
class SpinGraph:
    """A rooted spanning tree plus sibling bonds.

    ``parent[0] == 0`` marks the root. ``tree_edges`` are (parent, child)
    pairs and ``sibling_edges`` are (u, v) pairs with u < v sharing a parent.
    """

    num_spins: int
    parent: tuple[int, ...]
    depth: tuple[int, ...]
    tree_edges: tuple[tuple[int, int], ...]
    sibling_edges: tuple[tuple[int, int], ...]
    partner: tuple[int, ...] = field(repr=False, compare=False)

    root = 0

    @classmethod
    def from_parents(cls, parent: Iterable[int], siblings: Iterable[tuple[int, int]] = ()) -> "SpinGraph":
        """Build and validate a graph from a parent list and sibling pairs.

        Nodes must be listed so that every parent precedes its children.
        """
        parent = tuple(int(p) for p in parent)
        n = len(parent)
        if n == 0:
            raise ValueError("graph needs at least one node")
        if parent[0] != 0:
            raise ValueError("node 0 must be the root (parent[0] == 0)")
        depth = [0] * n
        for v in range(1, n):
            p = parent[v]
            if not 0 <= p < v:
                raise ValueError(f"parent of node {v} must precede it, got {p}")
            depth[v] = depth[p] + 1
        partner = [-1] * n
        sib = []
        for u, v in siblings:
            u, v = sorted((int(u), int(v)))
            if u == v or u == 0:
                raise ValueError(f"invalid sibling edge ({u}, {v})")
            if parent[u] != parent[v]:
                raise ValueError(f"sibling edge ({u}, {v}) joins nodes with different parents")
            if partner[u] != -1 or partner[v] != -1:
                raise ValueError(f"node in ({u}, {v}) already belongs to a sibling pair")
            partner[u], partner[v] = v, u
            sib.append((u, v))
        tree = tuple((parent[v], v) for v in range(1, n))
        return cls(n, parent, tuple(depth), tree, tuple(sib), tuple(partner))

    @property
    def max_depth(self) -> int:
        return max(self.depth)

    @property
    def paired(self) -> tuple[bool, ...]:
        return tuple(p >= 0 for p in self.partner)

    def edges(self) -> list[tuple[int, int]]:
        return list(self.tree_edges) + list(self.sibling_edges)

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.num_spins)]
        for u, v in self.edges():
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in range(self.num_spins)]
        for p, c in self.tree_edges:
            ch[p].append(c)
        return ch

    def induced(self, n: int) -> "SpinGraph":
        """Subgraph on nodes ``0..n-1`` (a construction-order prefix)."""
        sib = [(u, v) for u, v in self.sibling_edges if v < n]
        return SpinGraph.from_parents(self.parent[:n], sib)

    # -- edge-list text format -------------------------------------------

    def to_edgelist(self) -> str:
        lines = [f"N {self.num_spins} root 0"]
        lines += [f"T {u} {v}" for u, v in self.tree_edges]
        lines += [f"S {u} {v}" for u, v in self.sibling_edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "SpinGraph":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0][0] != "N" or len(lines[0]) != 4 or lines[0][2] != "root":
            raise ValueError("edge list must start with 'N <count> root 0'")
        n = int(lines[0][1])
        if int(lines[0][3]) != 0:
            raise ValueError("root must be node 0")
        parent = [-1] * n
        parent[0] = 0
        sib = []
        for parts in lines[1:]:
            tag, u, v = parts[0], int(parts[1]), int(parts[2])
            if tag == "T":
                if parent[v] != -1:
                    raise ValueError(f"node {v} has two tree parents")
                parent[v] = u
            elif tag == "S":
                sib.append((u, v))
            else:
                raise ValueError(f"unknown edge tag {tag!r}")
        if any(p < 0 for p in parent):
            raise ValueError("tree edges do not span all nodes")
        return cls.from_parents(parent, sib)


def _append_children(parent: list[int], sib: list[tuple[int, int]], paired: bool) -> None:
    """Give every existing node two new children, optionally bonded."""
    n = len(parent)
    for v in range(n):
        a = len(parent)
        parent += [v, v]
        if paired:
            sib.append((a, a + 1))


def _hierarchical(kind: Kind, k: int) -> tuple[list[int], list[tuple[int, int]]]:
    if k == 0:
        return [0], []
    if kind is Kind.S1:
        parent, sib = _hierarchical(Kind.S1, k - 1)
        _append_children(parent, sib, paired=False)
    elif kind is Kind.S2:
        parent, sib = _hierarchical(Kind.S1, k - 1)
        _append_children(parent, sib, paired=True)
    elif kind is Kind.S3:
        parent, sib = _hierarchical(Kind.S3, k - 1)
        _append_children(parent, sib, paired=True)
    else:
        parent, sib = _hierarchical(Kind.S3, k - 1)
        _append_children(parent, sib, paired=False)
    return parent, sib


def build_structure(spec: StructureSpec) -> SpinGraph:
    """Construct the spin graph of a structure.

    The canonical stabilizer Hamiltonian has many-body terms and no
    two-body graph; build it with
    :func:`stabtherm.pauli.build_canonical_hamiltonian` instead.
    """
    kind = spec.kind
    if kind is Kind.CANONICAL:
        raise ValueError(
            "the canonical stabilizer has no two-body graph; "
            "use stabtherm.pauli.build_canonical_hamiltonian(k)"
        )
    if kind is Kind.LINE:
        return SpinGraph.from_parents([0] + list(range(spec.size - 1)))
    if kind is Kind.STAR:
        return SpinGraph.from_parents([0] * spec.size)
    parent, sib = _hierarchical(kind, spec.level)
    return SpinGraph.from_parents(parent, sib)


def depth_profile(graph: SpinGraph) -> dict[int, int]:
    """Number of nodes at each tree distance from the root."""
    return dict(sorted(Counter(graph.depth).items()))


def paired_count(graph: SpinGraph) -> int:
    return 2 * len(graph.sibling_edges)
