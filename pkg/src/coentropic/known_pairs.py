"""Published reference data for coentropic graphs.

Each 9-vertex row is a pair of non-isomorphic, non-cospectral graphs with
equal Laplacian entropy, together with the entropy as a prime-log form or,
for one row, as an 8-decimal value.
"""

from fractions import Fraction as F

from .graph import Graph, parse_edge_text

# (graph G, graph H, prime-log coefficients or None, printed decimal or None)
TABLE_9 = [
    (
        "{{1, 8}, {1, 9}, {2, 8}, {2, 9}, {3, 8}, {3, 9}, {4, 8}, {4, 9}, "
        "{5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, "
        "{3, 9}, {4, 9}, {5, 9}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        {3: F(-1, 5), 2: F(3, 5), 5: F(1)},
        None,
    ),
    (
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 7}, "
        "{4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 8}, {3, 9}, "
        "{4, 8}, {4, 9}, {5, 9}, {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        {3: F(-15, 19), 2: F(-5, 19), 19: F(1)},
        None,
    ),
    (
        "{{1, 5}, {1, 8}, {1, 9}, {2, 6}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 8}, "
        "{4, 9}, {5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 7}, "
        "{4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 9}, {7, 9}, {8, 9}}",
        {3: F(1), 2: F(7, 6)},
        None,
    ),
    (
        "{{1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 8}, {3, 9}, "
        "{4, 8}, {4, 9}, {5, 9}, {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}}",
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 7}, "
        "{4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 9}, {7, 8}, {7, 9}}",
        None,
        "1.91025843",
    ),
    (
        "{{1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 8}, {3, 9}, "
        "{4, 8}, {4, 9}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 7}, "
        "{4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        {2: F(47, 20), 3: F(-6, 5), 5: F(1)},
        None,
    ),
    (
        "{{1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 8}, {3, 9}, "
        "{4, 8}, {4, 9}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}}",
        "{{1, 7}, {1, 8}, {1, 9}, {2, 7}, {2, 8}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 7}, "
        "{4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, {7, 9}, {8, 9}}",
        {2: F(6, 19), 7: F(-7, 38), 3: F(-15, 19), 19: F(1)},
        None,
    ),
    (
        "{{1, 4}, {1, 5}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 9}, {3, 6}, {3, 9}, {4, 5}, "
        "{4, 7}, {4, 8}, {4, 9}, {5, 7}, {5, 8}, {5, 9}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 5}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 6}, {3, 7}, {3, 8}, "
        "{3, 9}, {4, 8}, {4, 9}, {5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        {2: F(43, 20), 3: F(-21, 20), 5: F(1)},
        None,
    ),
    (
        "{{1, 4}, {1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 5}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, "
        "{3, 9}, {4, 6}, {4, 7}, {4, 8}, {4, 9}, {5, 6}, {5, 7}, {5, 8}, {5, 9}, {6, 8}, "
        "{6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        "{{1, 6}, {1, 7}, {1, 8}, {1, 9}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 6}, {3, 7}, "
        "{3, 8}, {3, 9}, {4, 6}, {4, 7}, {4, 8}, {4, 9}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, "
        "{6, 9}, {7, 8}, {7, 9}, {8, 9}}",
        {2: F(59, 24), 3: F(1, 4)},
        None,
    ),
]

# Un-normalized Laplacian spectra of the smallest example pair (8 vertices,
# 17 edges) and their common entropy ln(34) - (18 ln 3 + 54 ln 2)/34.
EXAMPLE_8_SPECTRA = ((0, 3, 3, 3, 3, 6, 8, 8), (0, 2, 2, 4, 6, 6, 6, 8))
EXAMPLE_8_ENTROPY = {2: F(1) - F(54, 34), 17: F(1), 3: F(-18, 34)}

# Number of coentropic, non-cospectral pairs by vertex count.
PAIR_COUNTS = {8: 2, 9: 8, 10: 76}


def table_graphs(row: int) -> tuple[Graph, Graph]:
    g, h, _, _ = TABLE_9[row]
    return parse_edge_text(g, 9), parse_edge_text(h, 9)
