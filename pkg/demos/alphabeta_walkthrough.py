"""
Alpha-beta over the worked radius trees
=======================================

Loads the four checked-in trees, searches them, and shows how child order
changes how much of the tree gets cut.
"""
from tankgame.gametree import (FIXTURE_NAMES, RADII, alphabeta_value, build_fixture,
                               choose_radius, format_tree, minimax_value)

# the main tree, in the plain-text format it is stored in
main = build_fixture("main")
print(format_tree(main))

# minimax looks at every node; alpha-beta skips whole subtrees
for name in FIXTURE_NAMES:
    tree = build_fixture(name)
    full = minimax_value(tree)
    cut = alphabeta_value(tree)
    print(f"{name:<18} value {cut.value:>5g}  visited {cut.visited:>2}/{full.visited:<2}"
          f"  pruned {cut.pruned}  path {' > '.join(cut.principal_path)}")

# the expected opponent arc, read off the principal variation of the main tree
print(f"\nexpected opponent radius: {choose_radius(RADII, shape=main):g}")

# with raw radii as payoffs, a minimizing root simply takes the tightest arc
print("tightest arc under MIN:", choose_radius(RADII, root_kind="MIN"))
