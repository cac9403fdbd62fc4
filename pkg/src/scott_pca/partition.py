"""Partitions of finite carriers, with the links that generated them."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet


@dataclass(frozen=True)
class Partition:
    """Blocks in order of first appearance; ``links`` are generating edges ``(x, y, U, V)``."""
    blocks: tuple
    links: tuple = ()

    @classmethod
    def from_links(cls, carrier: Sequence, links: Iterable[tuple]) -> "Partition":
        links = tuple(links)
        ds = DisjointSet(carrier)
        for x, y, *_ in links:
            ds.merge(x, y)
        found: dict = {}
        for x in carrier:
            found.setdefault(ds[x], []).append(x)
        return cls(tuple(frozenset(b) for b in found.values()), links)

    def block_of(self, x) -> frozenset:
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def same_block(self, x, y) -> bool:
        return y in self.block_of(x)

    def as_sets(self) -> frozenset:
        """Block structure alone, for comparing partitions."""
        return frozenset(self.blocks)

    def chain(self, x, y) -> list:
        """A zigzag of links ``(a, b, U, V)`` leading from ``x`` to ``y``."""
        adj: dict = {}
        for link in self.links:
            a, b, u, v = link
            adj.setdefault(a, []).append((b, (a, b, u, v)))
            adj.setdefault(b, []).append((a, (b, a, v, u)))
        prev = {x: None}
        todo = deque([x])
        while todo:
            a = todo.popleft()
            if a == y:
                break
            for b, link in adj.get(a, ()):
                if b not in prev:
                    prev[b] = (a, link)
                    todo.append(b)
        if y not in prev:
            raise ValueError(f"{x!r} and {y!r} lie in different blocks")
        out = []
        while prev[y] is not None:
            a, link = prev[y]
            out.append(link)
            y = a
        return out[::-1]
