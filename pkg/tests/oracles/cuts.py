"""Coupler degree by graph cuts (networkx), independent of the package.

Links ``o_1..o_6`` and joints ``h_1..h_6`` form a 12-cycle with joint ``h_k``
between ``o_{k-1}`` and ``o_k``.  Removing the vertices ``o_i`` and ``o_j``
leaves two paths; the coupler degree is the total weight of the connections
whose end joints lie on different paths.
"""
import networkx as nx


def coupler_degree(connections, i, j):
    G = nx.Graph()
    for k in range(1, 7):
        G.add_edge(("o", (k - 2) % 6 + 1), ("h", k))
        G.add_edge(("h", k), ("o", k))
    G.remove_nodes_from([("o", i), ("o", j)])
    side = {}
    for n, comp in enumerate(nx.connected_components(G)):
        for node in comp:
            side[node] = n
    return sum(w for (a, b), w in connections.items() if side[("h", a)] != side[("h", b)])
