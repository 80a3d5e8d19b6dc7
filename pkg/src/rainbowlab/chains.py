"""Union/intersection-closed set families and the chain they must contain.

If the characteristic vectors of a family closed under union and
intersection span a space of dimension ``t``, the family contains a chain
``A_1 < A_2 < ... < A_t`` of nonempty sets.  ``extract_chain`` builds one
by replaying the inductive argument step by step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, InvariantError
from .matroids import popcount


@dataclass(frozen=True)
class SetFamily:
    members: tuple[int, ...]
    union_closed: bool
    intersection_closed: bool

    @classmethod
    def of(cls, members: Iterable[int]) -> "SetFamily":
        ms = tuple(sorted(set(members)))
        if any(m <= 0 for m in ms):
            raise InputError("family members must be nonempty subsets")
        present = set(ms)
        uc = all(a | b in present for a in ms for b in ms)
        ic = all((a & b) in present or not a & b for a in ms for b in ms)
        return cls(ms, uc, ic)

    @property
    def closed(self) -> bool:
        return self.union_closed and self.intersection_closed

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def close_family(members: Iterable[int]) -> SetFamily:
    """Smallest family containing ``members`` closed under pairwise union and intersection.

    Empty intersections are dropped, since members are nonempty by
    convention; the empty set is trivially in any such lattice.
    """
    fam = {m for m in members}
    if not fam:
        raise InputError("close_family needs at least one member")
    if any(m <= 0 for m in fam):
        raise InputError("family members must be nonempty subsets")
    frontier = set(fam)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(fam):
                for c in (a | b, a & b):
                    if c and c not in fam:
                        new.add(c)
        fam |= new
        frontier = new
    return SetFamily.of(fam)


def span_dimension(family: SetFamily | Sequence[int]) -> int:
    """Rank over the rationals of the 0/1 characteristic vectors, by exact elimination."""
    members = family.members if isinstance(family, SetFamily) else tuple(family)
    if not members:
        return 0
    n = max(m.bit_length() for m in members)
    rows = [[Fraction(m >> v & 1) for v in range(n)] for m in members]
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                q = rows[i][col] / p[col]
                rows[i] = [x - q * y for x, y in zip(rows[i], p)]
        rank += 1
    return rank


@dataclass(frozen=True)
class Chain:
    sets: tuple[int, ...]

    def __len__(self):
        return len(self.sets)


def _in_chain_span(chain: Sequence[int], a: int) -> bool:
    # span of a chain = vectors constant on each block A_i \ A_{i-1} and zero outside the top
    if a & ~chain[-1]:
        return False
    prev = 0
    for top in chain:
        block = top & ~prev
        part = a & block
        if part and part != block:
            return False
        prev = top
    return True


def extract_chain(family: SetFamily) -> Chain:
    """Grow a chain one set at a time until its span equals the family's span.

    At each stage the first member (in mask order) outside the current span
    is ``A``.  If ``A`` leaves the top of the chain, ``top | A`` extends it;
    otherwise some block ``B_i = A_i - A_{i-1}`` is split by ``A`` and
    ``(A | A_{i-1}) & A_i`` fits strictly between ``A_{i-1}`` and ``A_i``.
    """
    if not family.members:
        raise InputError("cannot extract a chain from an empty family")
    if not family.closed:
        raise InputError("extract_chain needs a family closed under unions and intersections")
    members = family.members
    present = set(members)
    chain = [members[0]]
    while True:
        a = next((m for m in members if not _in_chain_span(chain, m)), None)
        if a is None:
            return Chain(tuple(chain))
        top = chain[-1]
        if a & ~top:
            new = top | a
            if new not in present:
                raise InvariantError(f"union {new:#x} missing from a family declared closed")
            chain.append(new)
            continue
        prev = 0
        for i, cur in enumerate(chain):
            block = cur & ~prev
            if block & a and block & ~a:
                mid = (a | prev) & cur
                if mid not in present:
                    raise InvariantError(f"set {mid:#x} missing from a family declared closed")
                chain.insert(i, mid)
                break
            prev = cur
        else:
            raise InvariantError(f"{a:#x} is a union of chain blocks yet lies outside their span")


def verify_chain(chain: Chain | Sequence[int], family: SetFamily | Iterable[int]) -> bool:
    sets = chain.sets if isinstance(chain, Chain) else tuple(chain)
    members = set(family.members if isinstance(family, SetFamily) else family)
    if not sets or sets[0] == 0:
        return False
    if any(s not in members for s in sets):
        return False
    return all(lo != hi and lo & ~hi == 0 for lo, hi in zip(sets, sets[1:]))


def chain_sizes(chain: Chain) -> list[int]:
    return [popcount(s) for s in chain.sets]
