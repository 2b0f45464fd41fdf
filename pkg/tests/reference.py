"""Golden affine ADE diagrams in Bourbaki numbering, typed in by hand.

Vertex 0 is the extending vertex. Nothing here imports the library.
"""

PARTITION_NUMBERS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def affine_A(n):
    if n == 1:
        return 2, [(0, 1), (0, 1)]
    return n + 1, [(i, (i + 1) % (n + 1)) for i in range(n + 1)]


def affine_D(n):
    edges = [(0, 2), (1, 2)] + [(k, k + 1) for k in range(2, n - 1)] + [(n - 2, n)]
    return n + 1, edges


E6 = (7, [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (0, 2)])
E7 = (8, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4), (0, 1)])
E8 = (9, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4), (0, 8)])

NULL_ROOTS = {
    "E6": (1, 1, 2, 2, 3, 2, 1),
    "E7": (1, 2, 2, 3, 4, 3, 2, 1),
    "E8": (1, 2, 3, 4, 6, 5, 4, 3, 2),
}


def adjacency(size, edges):
    mat = [[0] * size for _ in range(size)]
    for i, j in edges:
        mat[i][j] += 1
        mat[j][i] += 1
    return mat


def golden(label):
    """Adjacency matrix for a label A<n>, D<n>, E6, E7, E8."""
    if label in ("E6", "E7", "E8"):
        return adjacency(*{"E6": E6, "E7": E7, "E8": E8}[label])
    n = int(label[1:])
    return adjacency(*(affine_A(n) if label[0] == "A" else affine_D(n)))


def all_labels():
    return [f"A{m - 1}" for m in range(2, 9)] + [f"D{m + 2}" for m in range(2, 9)] + ["E6", "E7", "E8"]


def group_order(label):
    if label[0] == "A":
        return int(label[1:]) + 1
    if label[0] == "D":
        return 4 * (int(label[1:]) - 2)
    return {"E6": 24, "E7": 48, "E8": 120}[label]
