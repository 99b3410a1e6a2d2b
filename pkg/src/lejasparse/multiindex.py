"""Multi-indices of interpolation levels and downward-closed index sets."""

from __future__ import annotations

import csv
import itertools
from typing import Iterable, Iterator

MultiIndex = tuple[int, ...]


def unit(n: int, dim: int) -> MultiIndex:
    return tuple(1 if k == n else 0 for k in range(dim))


def backward_neighbors(idx: MultiIndex) -> Iterator[MultiIndex]:
    for n, level in enumerate(idx):
        if level > 0:
            yield idx[:n] + (level - 1,) + idx[n + 1 :]


def forward_neighbors(idx: MultiIndex) -> Iterator[MultiIndex]:
    for n in range(len(idx)):
        yield idx[:n] + (idx[n] + 1,) + idx[n + 1 :]


class MultiIndexSet:
    """Insertion-ordered set of multi-indices of a fixed dimension."""

    def __init__(self, dim: int, members: Iterable[Iterable[int]] = ()):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = dim
        self._order: list[MultiIndex] = []
        self._pos: dict[MultiIndex, int] = {}
        for m in members:
            self.add(m)

    def add(self, idx: Iterable[int]) -> MultiIndex:
        idx = tuple(int(v) for v in idx)
        if len(idx) != self.dim:
            raise ValueError(f"multi-index {idx} does not have dimension {self.dim}")
        if any(v < 0 for v in idx):
            raise ValueError(f"multi-index {idx} has negative levels")
        if idx in self._pos:
            raise ValueError(f"duplicate multi-index {idx}")
        self._pos[idx] = len(self._order)
        self._order.append(idx)
        return idx

    def __contains__(self, idx) -> bool:
        return tuple(idx) in self._pos

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiIndexSet):
            return NotImplemented
        return self.dim == other.dim and set(self._pos) == set(other._pos)

    def __repr__(self) -> str:
        return f"MultiIndexSet(dim={self.dim}, members={self._order})"

    def index(self, idx) -> int:
        return self._pos[tuple(idx)]

    def copy(self) -> MultiIndexSet:
        return MultiIndexSet(self.dim, self._order)

    def is_admissible(self, idx: MultiIndex) -> bool:
        """True if ``idx`` is new and all its backward neighbors are members."""
        idx = tuple(idx)
        return idx not in self._pos and all(b in self._pos for b in backward_neighbors(idx))

    def newly_admissible(self, idx: MultiIndex) -> list[MultiIndex]:
        """Forward neighbors of ``idx`` that are admissible once ``idx`` is a member."""
        idx = tuple(idx)
        return [
            f
            for f in forward_neighbors(idx)
            if f not in self._pos and all(b == idx or b in self._pos for b in backward_neighbors(f))
        ]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"i{n + 1}" for n in range(self.dim)])
            writer.writerows(self._order)


def is_downward_closed(indices: MultiIndexSet) -> bool:
    return all(b in indices for idx in indices for b in backward_neighbors(idx))


def admissible_set(indices: MultiIndexSet) -> MultiIndexSet:
    """All indices outside ``indices`` whose addition keeps it downward-closed."""
    if len(indices) == 0 or not is_downward_closed(indices):
        raise ValueError("admissible set requires a non-empty downward-closed set")
    out = MultiIndexSet(indices.dim)
    for idx in indices:
        for f in forward_neighbors(idx):
            if f not in out and indices.is_admissible(f):
                out.add(f)
    return out


def isotropic_set(dim: int, max_level: int) -> MultiIndexSet:
    """Total-degree set ``{i : sum(i) <= max_level}`` ordered by total level."""
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    out = MultiIndexSet(dim)
    for total in range(max_level + 1):
        for idx in sorted(_compositions(total, dim)):
            out.add(idx)
    return out


def _compositions(total: int, dim: int) -> Iterator[MultiIndex]:
    for bars in itertools.combinations(range(total + dim - 1), dim - 1):
        edges = (-1,) + bars + (total + dim - 1,)
        yield tuple(edges[k + 1] - edges[k] - 1 for k in range(dim))


def linear_extension(indices: Iterable[MultiIndex]) -> list[MultiIndex]:
    """Members ordered so that every index follows all indices below it."""
    return sorted((tuple(i) for i in indices), key=lambda i: (sum(i), i))
