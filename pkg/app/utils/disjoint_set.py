# app/utils/disjoint_set.py


class DisjointSet:
    """
    Union-find over nodes 0..n-1 with path compression and union by size.

    >>> ds = DisjointSet(5)
    >>> ds.union(0, 1), ds.union(1, 2), ds.union(0, 2)
    (True, True, False)
    >>> ds.components, ds.largest
    (3, 3)
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n
        self.largest = 1 if n else 0

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        # path compression
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx = self.find(x)
        ry = self.find(y)
        if rx == ry:
            return False
        size = self.size
        if size[rx] < size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        size[rx] += size[ry]
        self.components -= 1
        if size[rx] > self.largest:
            self.largest = size[rx]
        return True
