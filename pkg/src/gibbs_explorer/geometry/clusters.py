"""
Clusters of the intersection relation

`cluster` answers single-seed queries by breadth-first search; `components`
labels the whole intersection graph with a disjoint-set forest over
KD-tree candidate pairs.
"""

from collections import deque
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .particles import Particle, intersects


def cluster(seed: Particle, particles: Sequence[Particle]) -> List[Particle]:
    """
    Particles of the configuration connected to `seed` through chains of
    intersecting particles, in configuration order

    The seed is the chain's start; it belongs to the result only if it is
    itself listed in the configuration.
    """
    remaining = set(range(len(particles)))
    reached = []
    frontier = deque([seed])
    while frontier and remaining:
        current = frontier.popleft()
        hits = [i for i in remaining if intersects(current, particles[i])]
        for i in hits:
            remaining.discard(i)
            reached.append(i)
            frontier.append(particles[i])
    return [particles[i] for i in sorted(reached)]


class DisjointSet:
    """Union-find with path compression and union by size"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True

    def groups(self) -> List[List[int]]:
        by_root: Dict[int, List[int]] = {}
        for i in range(len(self.parent)):
            by_root.setdefault(self.find(i), []).append(i)
        return sorted(by_root.values(), key=lambda g: g[0])


def candidate_pairs(particles: Sequence[Particle]) -> List[Tuple[int, int]]:
    """Index pairs whose germs are close enough for their grains to meet"""
    if len(particles) < 2:
        return []
    centers = np.array([p.center for p in particles])
    reach = max(p.reach for p in particles)
    tree = cKDTree(centers)
    return sorted(tree.query_pairs(r=2.0 * reach + 1e-9))


def components(particles: Sequence[Particle]) -> List[List[int]]:
    """Connected components of the intersection graph as sorted index lists"""
    forest = DisjointSet(len(particles))
    for i, j in candidate_pairs(particles):
        if intersects(particles[i], particles[j]):
            forest.union(i, j)
    return forest.groups()


def component_statistics(particles: Sequence[Particle]) -> Dict[str, float]:
    """Summary of cluster sizes for a configuration"""
    sizes = [len(g) for g in components(particles)]
    if not sizes:
        return {"count": 0, "largest": 0, "mean_size": 0.0}
    return {"count": len(sizes), "largest": max(sizes), "mean_size": float(np.mean(sizes))}
