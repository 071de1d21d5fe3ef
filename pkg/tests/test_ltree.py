import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from leadtree import (
    NONE,
    ModeViolationError,
    ParameterError,
    StructuralError,
    assign_baseline,
    build,
    fit,
    forest_labels,
    jump_depth,
    select_centers,
    split,
)
from leadtree.datasets import ds1_fixture
from leadtree.ltree import forest_depths, to_dot, write_parents_csv


@pytest.fixture
def ds1():
    return ds1_fixture()


def children_1based(tree):
    return {p + 1: (tree.children(p) + 1).tolist() for p in range(tree.n) if tree.children(p).size}


def test_build_ds1_topology(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    assert children_1based(tree) == {
        13: [6, 12, 2], 12: [11, 3, 1], 6: [8, 4, 5], 8: [7], 11: [10, 9],
    }
    assert tree.root == 12


def test_build_matches_append_loop(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    al = oracles.leading_tree_lists(ds1.nneigh.tolist(), ds1.sort_gamma_ind.tolist())
    assert [tree.children(p).tolist() for p in range(13)] == al


def test_build_trivial_sizes():
    one = build([NONE], [0])
    assert one.n == 1 and one.children(0).size == 0 and list(one.edges()) == []
    two = build([1, NONE], [1, 0])
    assert two.root == 1 and two.children(1).tolist() == [0]


def test_build_rejects_bad_parent_arrays():
    with pytest.raises(StructuralError, match="exactly one root"):
        build([NONE, NONE, 0], [0, 1, 2])
    with pytest.raises(StructuralError, match="cycle"):
        build([NONE, 2, 1], [0, 1, 2])
    with pytest.raises(StructuralError, match="start at the root"):
        build([1, NONE], [0, 1])
    with pytest.raises(StructuralError):
        build([NONE, 1], [0, 1])  # self loop
    with pytest.raises(StructuralError):
        build([NONE, 5], [0, 1])


def test_tree_is_read_only(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    with pytest.raises(ValueError):
        tree.parent[0] = 3


def test_split_ds1(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    forest = split(tree, [12, 5, 10])
    assert forest.cut_set == ((12, 5), (11, 10))
    labels = forest_labels(forest)
    assert labels.tolist() == ds1.cl.tolist()
    members = {k: sorted((np.flatnonzero(labels == k) + 1).tolist()) for k in (1, 2, 3)}
    assert members == {1: [1, 2, 3, 12, 13], 2: [4, 5, 6, 7, 8], 3: [9, 10, 11]}
    assert split(tree, [12, 5, 10], mode="general").cut_set == forest.cut_set


def test_split_matches_destructive_remove_first(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    al = oracles.leading_tree_lists(ds1.nneigh.tolist(), ds1.sort_gamma_ind.tolist())
    after = oracles.split_destructive(al, ds1.nneigh.tolist(), [12, 5, 10])
    forest = split(tree, [12, 5, 10])
    cut = set(forest.cut_set)
    kept = [[c for c in tree.children(p).tolist() if (p, c) not in cut] for p in range(13)]
    assert kept == after


def test_split_root_only(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    forest = split(tree, [12])
    assert forest.cut_set == ()
    assert set(forest_labels(forest).tolist()) == {1}


def test_split_every_point(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    order = ds1.sort_gamma_ind
    labels = forest_labels(split(tree, order))
    rank = {c: k + 1 for k, c in enumerate(order.tolist())}
    assert labels.tolist() == [rank[i] for i in range(13)]


def test_split_errors(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    with pytest.raises(ModeViolationError):
        split(tree, [12, 10])  # skips 6
    with pytest.raises(ModeViolationError):
        split(tree, [5, 12])  # root not first
    with pytest.raises(ParameterError):
        split(tree, [12, 12])
    with pytest.raises(ParameterError):
        split(tree, [12, 99])
    with pytest.raises(ParameterError):
        split(tree, [12], mode="fast")
    with pytest.raises(ParameterError):
        split(tree, [5, 10], mode="general")  # root missing


def test_general_mode_accepts_any_center_set(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    centers = [12, 10, 7]  # 11, 8 (1-based): not a gamma prefix
    forest = split(tree, centers, mode="general")
    assert forest_labels(forest).tolist() == oracles.labels_by_walk(ds1.nneigh.tolist(), centers)
    assert forest_labels(forest).tolist() == assign_baseline(ds1.nneigh, ds1.ord_rho, centers).tolist()


def test_jump_depth_ds1(ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    forest = split(tree, [12, 5, 10])
    assert jump_depth(forest, 1) == 1  # object 2: straight to 13
    assert jump_depth(forest, 0) == 2  # object 1: via 12
    assert jump_depth(forest, 2) == 2  # object 3: via 12
    for c in forest.centers:
        assert jump_depth(forest, c) == 0
    depths = forest_depths(forest)
    assert depths.tolist() == [jump_depth(forest, i) for i in range(13)]


@given(st.integers(0, 199), st.sampled_from([1, 2, 3, 5, 8]))
@settings(max_examples=40, deadline=None)
def test_split_properties(seed, m):
    f = fit(oracles.random_instance(seed))
    tree = f.tree
    m = min(m, tree.n)
    centers = select_centers(f.profile.gamma_order, m)
    fast = split(tree, centers, "prefix_fast")
    gen = split(tree, centers, "general")
    assert fast.cut_set == gen.cut_set and len(fast.cut_set) == m - 1
    labels = forest_labels(fast)
    assert len(set(labels.tolist())) == m
    assert labels.tolist() == assign_baseline(f.profile.nn, f.profile.q, centers).tolist()
    nn = f.profile.nn.tolist()
    for i in range(0, tree.n, max(1, tree.n // 15)):
        d = jump_depth(fast, i)
        assert d == oracles.depth_by_walk(nn, centers.tolist(), i) < tree.n
    rank = tree.gamma_rank
    for p in range(tree.n):
        kids = tree.children(p)
        assert np.all(np.diff(rank[kids]) > 0)


def test_parents_csv_and_dot(tmp_path, ds1):
    tree = build(ds1.nneigh, ds1.sort_gamma_ind)
    forest = split(tree, [12, 5, 10])
    path = tmp_path / "parents.csv"
    write_parents_csv(path, forest)
    rows = [r.split(",") for r in path.read_text().splitlines()]
    assert rows[0] == ["index", "parent", "depth", "label"]
    by_index = {int(r[0]): r[1:] for r in rows[1:]}
    assert by_index[13] == ["-1", "0", "1"]
    assert by_index[6] == ["-1", "0", "2"]
    assert by_index[1] == ["12", "2", "1"]
    assert by_index[2] == ["13", "1", "1"]

    dot = to_dot(forest)
    assert dot.startswith("digraph")
    assert "13 -> 6;" not in dot and "12 -> 11;" not in dot
    assert "13 -> 12;" in dot and "6 -> 8;" in dot
    assert dot.count("doublecircle") == 3
    assert dot.count("->") == 13 - 3
