import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_minimax
from tankgame.gametree import (FIXTURE_NAMES, MAX, MIN, RADII, GameTree,
                               MalformedTree, SearchWindow, TreeNode, alphabeta_value,
                               best_first, build_fixture, choose_radius, format_tree,
                               load_tree, minimax_value, parse_tree, random_tree, reorder,
                               uniform_tree)

EXPECTED = {"main": 30, "ascending": 100, "descending": 100, "single_branch_max": 160}


def leaf(nid, v, kind=MAX):
    return TreeNode(nid, kind, (), v)


def small_min_tree():
    nodes = {"m": TreeNode("m", MIN, ("a", "b")), "a": leaf("a", 30), "b": leaf("b", 40)}
    return GameTree("m", nodes)


# -- fixtures -----------------------------------------------------------------

@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_values(name):
    tree = build_fixture(name)
    ab = alphabeta_value(tree)
    assert ab.value == EXPECTED[name]
    assert minimax_value(tree).value == EXPECTED[name]
    assert brute_minimax(tree) == EXPECTED[name]


def test_main_fixture_first_min_node_backs_up_to_30():
    tree = build_fixture("main")
    first_min = next(n for n in tree.nodes.values()
                     if n.layer_kind == MIN and all(tree[c].is_leaf for c in n.children))
    assert brute_minimax(tree, first_min.id) == 30


def test_fixture_leaf_orders():
    asc = [n.leaf_value for n in build_fixture("ascending").leaves()]
    desc = [n.leaf_value for n in build_fixture("descending").leaves()]
    assert asc == sorted(asc)
    assert desc == sorted(desc, reverse=True)
    assert set(asc) <= set(RADII) and set(desc) <= set(RADII)


def test_ordering_changes_pruning_but_not_value():
    res = {n: alphabeta_value(build_fixture(n)) for n in
           ("ascending", "descending", "single_branch_max")}
    assert len({r.pruned for r in res.values()}) == 3
    assert res["ascending"].value == res["descending"].value == 100


def test_unknown_fixture():
    with pytest.raises(KeyError):
        build_fixture("nonexistent")


# -- basic search ---------------------------------------------------------------

def test_single_leaf():
    tree = GameTree("x", {"x": leaf("x", 42)})
    for res in (minimax_value(tree), alphabeta_value(tree)):
        assert res.value == 42
        assert res.visited == 1
        assert res.principal_child is None


def test_min_node_over_two_leaves():
    assert minimax_value(small_min_tree()).value == 30
    res = alphabeta_value(small_min_tree())
    assert res.value == 30 and res.principal_child == "a"


def test_minimax_counts_every_node():
    tree = build_fixture("main")
    res = minimax_value(tree)
    assert res.visited == len(tree) and res.pruned == 0


def test_window_narrower_than_value_fails_soft():
    tree = build_fixture("main")
    low = alphabeta_value(tree, SearchWindow(50, 60))
    assert low.value <= 50
    high = alphabeta_value(tree, SearchWindow(0, 10))
    assert high.value >= 10


def test_principal_child_tie_goes_to_first():
    nodes = {"r": TreeNode("r", MAX, ("a", "b", "c")),
             "a": leaf("a", 5, MIN), "b": leaf("b", 9, MIN), "c": leaf("c", 9, MIN)}
    tree = GameTree("r", nodes)
    assert alphabeta_value(tree).principal_child == "b"
    assert minimax_value(tree).principal_child == "b"


# -- random trees against the oracle -----------------------------------------

def test_thousand_random_trees_match_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        tree = random_tree(rng, max_depth=5, max_branching=4)
        ab = alphabeta_value(tree)
        mm = minimax_value(tree)
        assert ab.value == mm.value == brute_minimax(tree)
        assert 1 <= ab.visited <= mm.visited == len(tree)
        assert ab.pruned >= 0


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from([MAX, MIN]))
def test_alphabeta_matches_minimax(seed, kind):
    tree = random_tree(np.random.default_rng(seed), root_kind=kind)
    ab, mm = alphabeta_value(tree), minimax_value(tree)
    assert ab.value == mm.value
    assert ab.principal_child == mm.principal_child
    if ab.principal_child is not None:
        assert ab.principal_child in tree[tree.root].children


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_decision_stability(seed):
    tree = random_tree(np.random.default_rng(seed), max_depth=4)
    root = tree[tree.root]
    if root.is_leaf:
        return
    vals = [brute_minimax(tree, c) for c in root.children]
    best = max(vals) if root.layer_kind == MAX else min(vals)
    assert alphabeta_value(tree).principal_child == root.children[vals.index(best)]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), branching=st.integers(2, 3), depth=st.integers(1, 4))
def test_best_first_ordering_is_minimal(seed, branching, depth):
    rng = np.random.default_rng(seed)
    table = {}
    tree = uniform_tree(range(branching), lambda p: table.setdefault(p, float(rng.random())),
                        depth)
    best = alphabeta_value(best_first(tree)).visited
    for _ in range(20):
        shuffled = reorder(tree, lambda n, kids: list(rng.permutation(kids)))
        assert alphabeta_value(shuffled).visited >= best


# -- malformed trees --------------------------------------------------------------

def test_cycle_is_reported():
    nodes = {"r": TreeNode("r", MAX, ("a",)), "a": TreeNode("a", MIN, ("r",))}
    with pytest.raises(MalformedTree) as err:
        GameTree("r", nodes)
    assert err.value.node_id in {"r", "a"}


def test_valueless_leaf_is_reported():
    nodes = {"r": TreeNode("r", MAX, ("a",)), "a": TreeNode("a", MIN, ())}
    with pytest.raises(MalformedTree) as err:
        GameTree("r", nodes)
    assert err.value.node_id == "a"


@pytest.mark.parametrize("value", [math.inf, math.nan])
def test_non_finite_leaf(value):
    nodes = {"r": TreeNode("r", MAX, ("a",)), "a": leaf("a", value, MIN)}
    with pytest.raises(MalformedTree):
        GameTree("r", nodes)


def test_shared_child_and_bad_alternation():
    shared = {"r": TreeNode("r", MAX, ("a", "b")), "a": TreeNode("a", MIN, ("c",)),
              "b": TreeNode("b", MIN, ("c",)), "c": leaf("c", 1)}
    with pytest.raises(MalformedTree) as err:
        GameTree("r", shared)
    assert err.value.node_id == "c"
    same = {"r": TreeNode("r", MAX, ("a",)), "a": leaf("a", 1, MAX)}
    with pytest.raises(MalformedTree):
        GameTree("r", same)


@pytest.mark.parametrize("text", [
    "",
    "a MAX -\nb MAX -\n",
    "a MAX -\nb MIN a\nb MIN a 3\n",
    "a MAX -\nb MIN zz 3\n",
    "a MAX -\nb MIN a abc\n",
    "a MAX - 1 2\n",
])
def test_parse_errors(text):
    with pytest.raises(MalformedTree):
        parse_tree(text)


# -- tree files -------------------------------------------------------------------

@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trip(name, tmp_path):
    tree = build_fixture(name)
    path = tmp_path / f"{name}.tree"
    path.write_text(format_tree(tree))
    again = load_tree(path)
    assert again.root == tree.root
    assert {k: (n.layer_kind, n.children, n.leaf_value) for k, n in again.nodes.items()} == \
           {k: (n.layer_kind, n.children, n.leaf_value) for k, n in tree.nodes.items()}


def test_comments_and_blank_lines():
    text = "# header\n\nr MAX -   # root\nx MIN r 7\n"
    tree = parse_tree(text)
    assert alphabeta_value(tree).value == 7


# -- choose_radius ------------------------------------------------------------------

def test_choose_radius_main_shape():
    assert choose_radius(RADII, shape=build_fixture("main")) == 30


def test_choose_radius_single_candidate():
    assert choose_radius([80]) == 80
    assert choose_radius([80], depth=3) == 80


def test_choose_radius_identity_min_root():
    assert choose_radius(RADII, root_kind=MIN) == min(RADII)
    assert choose_radius(RADII) == max(RADII)


def test_choose_radius_mapping_payoff():
    payoff = {r: -abs(r - 75) for r in RADII}
    assert choose_radius(RADII, payoff) in (70, 80)
    assert choose_radius(RADII, payoff) == 70


@settings(max_examples=50, deadline=None)
@given(radii=st.lists(st.integers(10, 200), min_size=1, max_size=6, unique=True),
       depth=st.integers(1, 3))
def test_choose_radius_returns_a_candidate(radii, depth):
    r = choose_radius(radii, lambda path: sum(path) % 37, depth)
    assert r in radii


def test_choose_radius_rejects_empty():
    with pytest.raises(ValueError):
        choose_radius([])
