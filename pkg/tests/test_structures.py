from math import comb

import pytest
from hypothesis import given, strategies as st

from stabtherm.structures import (
    Kind,
    SpinGraph,
    StructureSpec,
    build_structure,
    depth_profile,
    paired_count,
)

TREE_KINDS = (Kind.S1, Kind.S2, Kind.S3, Kind.S4)


@pytest.mark.parametrize(
    "kind,k,tree,sib",
    [(Kind.S1, 1, 2, 0), (Kind.S3, 2, 8, 4), (Kind.S4, 2, 8, 1), (Kind.S2, 2, 8, 3)],
)
def test_edge_counts(kind, k, tree, sib):
    g = build_structure(StructureSpec(kind, k))
    assert g.num_spins == 3**k
    assert len(g.tree_edges) == tree
    assert len(g.sibling_edges) == sib


def test_single_node_cases():
    for kind in TREE_KINDS:
        g = build_structure(StructureSpec(kind, 0))
        assert g.num_spins == 1 and not g.tree_edges and not g.sibling_edges
    g = build_structure(StructureSpec(Kind.LINE, size=1))
    assert g.num_spins == 1 and g.edges() == []


def test_canonical_rejected():
    with pytest.raises(ValueError, match="build_canonical_hamiltonian"):
        build_structure(StructureSpec(Kind.CANONICAL, 2))


def test_invalid_specs():
    with pytest.raises(ValueError):
        StructureSpec(Kind.S1, -1)
    with pytest.raises(ValueError):
        StructureSpec(Kind.S1)
    with pytest.raises(ValueError):
        StructureSpec(Kind.LINE, size=0)
    with pytest.raises(ValueError):
        Kind.parse("s9")


def test_line_and_star_shape():
    line = build_structure(StructureSpec(Kind.LINE, size=5))
    assert depth_profile(line) == {d: 1 for d in range(5)}
    star = build_structure(StructureSpec(Kind.STAR, size=6))
    assert depth_profile(star) == {0: 1, 1: 5}
    assert StructureSpec(Kind.LINE, level=2).n_spins == 9


@pytest.mark.parametrize("k", range(9))
def test_s1_depth_profile(k):
    prof = depth_profile(build_structure(StructureSpec(Kind.S1, k)))
    assert prof == {d: 2**d * comb(k, d) for d in range(k + 1)}


def test_depth_profile_examples():
    prof = depth_profile(build_structure(StructureSpec(Kind.S1, 3)))
    assert prof[2] == 12 and prof[0] == 1


@pytest.mark.parametrize("k", range(1, 7))
def test_paired_counts(k):
    assert paired_count(build_structure(StructureSpec(Kind.S1, k))) == 0
    assert paired_count(build_structure(StructureSpec(Kind.S2, k))) == 2 * 3 ** (k - 1)
    assert paired_count(build_structure(StructureSpec(Kind.S3, k))) == 3**k - 1
    assert paired_count(build_structure(StructureSpec(Kind.S4, k))) == 3 ** (k - 1) - 1


@pytest.mark.parametrize("kind", TREE_KINDS)
@pytest.mark.parametrize("k", range(0, 6))
def test_graph_invariants(kind, k):
    g = build_structure(StructureSpec(kind, k))
    n = g.num_spins
    assert g.parent[0] == 0 and g.depth[0] == 0
    assert len(g.tree_edges) == n - 1
    for p, c in g.tree_edges:
        assert g.parent[c] == p and g.depth[c] == g.depth[p] + 1
    seen = set()
    for u, v in g.sibling_edges:
        assert 0 not in (u, v)
        assert g.parent[u] == g.parent[v]
        assert u not in seen and v not in seen
        seen |= {u, v}


@pytest.mark.parametrize("core,outer", [(Kind.S1, Kind.S2), (Kind.S3, Kind.S4), (Kind.S1, Kind.S1), (Kind.S3, Kind.S3)])
@pytest.mark.parametrize("k", range(1, 6))
def test_recursive_core(core, outer, k):
    # the first 3**(k-1) nodes of the level-k graph are the level-(k-1) core
    g = build_structure(StructureSpec(outer, k))
    c = build_structure(StructureSpec(core, k - 1))
    assert g.induced(c.num_spins) == c


@given(kind=st.sampled_from(TREE_KINDS), k=st.integers(0, 5))
def test_edgelist_roundtrip(kind, k):
    g = build_structure(StructureSpec(kind, k))
    text = g.to_edgelist()
    assert text.splitlines()[0] == f"N {g.num_spins} root 0"
    assert SpinGraph.from_edgelist(text) == g


def test_from_parents_validation():
    with pytest.raises(ValueError):
        SpinGraph.from_parents([0, 0, 0], siblings=[(0, 1)])
    with pytest.raises(ValueError):
        SpinGraph.from_parents([0, 2, 1])
    with pytest.raises(ValueError):
        SpinGraph.from_parents([0, 0, 0, 0], siblings=[(1, 2), (2, 3)])
