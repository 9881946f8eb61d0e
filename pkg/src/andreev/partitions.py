"""Integer partitions and Young-diagram cell geometry.

Partitions index every partition series in this package (Jack polynomials,
hypergeometric functions of matrix argument).  They are stored trimmed
(no trailing zeros) and are immutable, so they can be shared freely and
used as dictionary keys.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class Partition:
    """A non-increasing tuple of positive integers.

    ``Partition((3, 1))`` has weight 4 and length 2.  Trailing zeros in the
    input are trimmed; ``Partition(())`` is the empty partition.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be non-increasing, got {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be non-negative, got {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"

    def __bool__(self):
        return bool(self.parts)

    def conjugate(self) -> "Partition":
        """Transpose of the diagram: row k of the conjugate counts parts >= k."""
        if not self.parts:
            return Partition()
        return Partition(
            sum(1 for p in self.parts if p >= k) for k in range(1, self.parts[0] + 1)
        )

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield the 1-based (row, col) coordinates of every box."""
        for i, p in enumerate(self.parts, start=1):
            for j in range(1, p + 1):
                yield (i, j)

    def contains_cell(self, row: int, col: int) -> bool:
        return 1 <= row <= len(self.parts) and 1 <= col <= self.parts[row - 1]

    def doubled(self) -> "Partition":
        """(2*l1, 2*l2, ...)."""
        return Partition(2 * p for p in self.parts)

    def union_self(self) -> "Partition":
        """(l1, l1, l2, l2, ...): each part repeated twice."""
        out = []
        for p in self.parts:
            out += [p, p]
        return Partition(out)

    def is_even(self) -> bool:
        """True iff every part is even."""
        return all(p % 2 == 0 for p in self.parts)

    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Partition":
        return cls(data)


def as_partition(lam) -> Partition:
    """Coerce a Partition, tuple or list to a Partition."""
    return lam if isinstance(lam, Partition) else Partition(lam)


def cell_data(lam, row: int, col: int) -> tuple[int, int, int, int]:
    """Return (arm, leg, coarm, coleg) of the box at the 1-based (row, col).

    arm counts boxes to the right, leg boxes below, coarm boxes to the left
    and coleg boxes above.  Raises ValueError for cells outside the diagram.
    """
    lam = as_partition(lam)
    if not lam.contains_cell(row, col):
        raise ValueError(f"cell ({row},{col}) outside diagram of {lam}")
    conj = lam.conjugate()
    arm = lam.parts[row - 1] - col
    leg = conj.parts[col - 1] - row
    return arm, leg, col - 1, row - 1


def partitions_of(weight: int, max_length: int | None = None,
                  max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield all partitions of exactly `weight` as tuples, largest part first.

    Within the weight the order is reverse-lexicographic: (3), (2,1), (1,1,1).
    """
    if weight < 0:
        return
    if max_length is None:
        max_length = weight
    if max_part is None:
        max_part = weight
    if weight == 0:
        yield ()
        return
    if max_length <= 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in partitions_of(weight - first, max_length - 1, first):
            yield (first,) + rest


def enumerate_partitions(max_weight: int, max_length: int | None = None) -> Iterator[Partition]:
    """Yield every partition with weight <= max_weight and length <= max_length.

    Grouped by ascending weight, reverse-lexicographic within each weight, so
    truncating a partition series by weight is a prefix of this stream.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    for w in range(max_weight + 1):
        for parts in partitions_of(w, max_length):
            yield Partition(parts)


def dominates(lam, mu) -> bool:
    """True iff lam >= mu in dominance order (equal weights assumed)."""
    lam = as_partition(lam).parts
    mu = as_partition(mu).parts
    s_lam = s_mu = 0
    for k in range(max(len(lam), len(mu))):
        s_lam += lam[k] if k < len(lam) else 0
        s_mu += mu[k] if k < len(mu) else 0
        if s_mu > s_lam:
            return False
    return True
