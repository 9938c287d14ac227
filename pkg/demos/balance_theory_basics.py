"""A walking tour of the balance-theory primitives.

Signed networks attach a +1 (friend/trust) or -1 (foe/distrust) label to
every edge. Balance theory says a cycle "feels consistent" when it carries
an even number of negative edges: my friend's friend should be my friend,
and my enemy's enemy should be my friend too. This script shows the
primitives the rest of the package builds on: triangle classification,
path parity, reachability along balanced/unbalanced walks, and a triangle
census of a real trust network.

Run from the repository root:

    python demos/balance_theory_basics.py
"""

from pathlib import Path

from sgcn import (
    SignedGraph,
    classify_triangle,
    load_edge_list,
    path_class,
    reach_sets,
    to_undirected,
    triangle_census,
)

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    print("=== Triangles ===")
    print("All four sign patterns of an undirected triangle:")
    for signs in [(1, 1, 1), (1, -1, -1), (1, 1, -1), (-1, -1, -1)]:
        label = classify_triangle(*signs)
        pretty = " ".join("+" if s > 0 else "-" for s in signs)
        print(f"  ({pretty})  ->  {label.value}")
    print("Two of them are balanced: all friends, or two enemies sharing a friend.")

    print()
    print("=== Paths ===")
    print("A path is balanced exactly when its negative edges come in pairs:")
    for signs in [[1, 1], [-1, -1], [1, -1], [-1, 1, -1, -1]]:
        pretty = " ".join("+" if s > 0 else "-" for s in signs)
        print(f"  [{pretty}]  ->  {path_class(signs).value}")

    print()
    print("=== Reachability along balanced and unbalanced walks ===")
    # A 5-node playground: 0 -(+)- 1 -(-)- 2 -(-)- 3, and 0 -(-)- 4.
    g = SignedGraph.from_edges(
        5, [(0, 1, 1), (1, 2, -1), (2, 3, -1), (0, 4, -1)]
    )
    rs = reach_sets(g, 0, 3)
    for length in (1, 2, 3):
        print(
            f"  length {length}: balanced={sorted(rs.balanced_at(length))} "
            f"unbalanced={sorted(rs.unbalanced_at(length))}"
        )
    print("Node 2 is reached by a friend-then-enemy walk (one negative edge),")
    print("so it lands in the unbalanced set at length 2; node 3 needs the")
    print("full +,-,- walk (two negatives) and comes out balanced at length 3.")

    print()
    print("=== Census of a real trust network ===")
    alpha = to_undirected(load_edge_list(DATA / "bitcoin_alpha.csv", "weighted-csv"))
    census = triangle_census(alpha)
    print(f"Bitcoin-Alpha: {alpha.n} users, {alpha.num_pos_edges} positive and "
          f"{alpha.num_neg_edges} negative edges")
    print(f"  all positive : {census.all_positive}")
    print(f"  one negative : {census.one_negative}")
    print(f"  two negative : {census.two_negative}")
    print(f"  all negative : {census.all_negative}")
    frac = census.balanced / census.total
    print(f"Balanced fraction: {frac:.3f} -- real trust networks lean heavily")
    print("balanced, which is exactly the structure the embedding model exploits.")


if __name__ == "__main__":
    main()
