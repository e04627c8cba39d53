"""Permutations of {1..n}, generated subgroups, and solvability chains.

The composition convention is fixed globally: ``compose(p, q)`` is the
map x -> p(q(x)), i.e. the right factor acts first, matching function
composition.  Cycle notation reads left to right within a cycle:
``(1 2 3)`` sends 1 -> 2, 2 -> 3, 3 -> 1.  Everything that pairs
permutations with paths relies on this one convention.

Groups are represented by explicit element enumeration; the letter count
is capped at 9, which keeps the largest symmetric group at 362880
elements, comfortable at desk scale and easy to audit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

MAX_LETTERS = 9


class PermutationError(ValueError):
    """Malformed permutation data or incompatible operands."""


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {1..n} stored as its image tuple.

    ``images[i-1]`` is the image of letter ``i``.
    """

    images: tuple

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        n = len(images)
        if n < 1:
            raise PermutationError("a permutation needs at least one letter")
        if sorted(images) != list(range(1, n + 1)):
            raise PermutationError(f"images {images} are not a bijection of 1..{n}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, letter: int) -> int:
        return self.images[letter - 1]

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return Permutation(tuple(inv))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def from_cycles(n: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        """Build from disjoint cycles; letters absent from all cycles are fixed."""
        images = list(range(1, n + 1))
        seen = set()
        for cycle in cycles:
            cycle = [int(c) for c in cycle]
            for c in cycle:
                if not (1 <= c <= n):
                    raise PermutationError(f"letter {c} outside 1..{n}")
                if c in seen:
                    raise PermutationError(f"letter {c} appears in two cycles")
                seen.add(c)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b
        return Permutation(tuple(images))

    def cycles(self) -> tuple:
        """Non-trivial cycles, each starting at its smallest letter."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def cycle_string(self) -> str:
        """Cycle-notation text form; the identity prints as "()"."""
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(c) for c in cyc) + ")" for cyc in cycles)

    @staticmethod
    def parse_cycle_string(text: str, n: int) -> "Permutation":
        """Inverse of :meth:`cycle_string`, for a declared letter count."""
        text = text.strip()
        if text == "()":
            return Permutation.identity(n)
        if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\))+", text):
            raise PermutationError(f"not a cycle string: {text!r}")
        cycles = [tuple(int(v) for v in body.split())
                  for body in re.findall(r"\(([^)]*)\)", text)]
        return Permutation.from_cycles(n, cycles)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(x) = p(q(x)); q is applied first."""
    if p.n != q.n:
        raise PermutationError(f"size mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p.images[q.images[i] - 1] for i in range(p.n)))


def commutator_perm(p: Permutation, q: Permutation) -> Permutation:
    """p . q . p^-1 . q^-1 under the fixed composition convention."""
    return compose(compose(compose(p, q), p.inverse()), q.inverse())


@dataclass(frozen=True)
class PermGroup:
    """An explicitly enumerated permutation group on n letters."""

    n: int
    elements: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self.elements

    def sorted_elements(self) -> list:
        return sorted(self.elements)


def _close(gens: Sequence[Permutation], n: int) -> frozenset:
    """Closure of the generated subgroup by breadth-first right multiplication."""
    identity = Permutation.identity(n)
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                prod = compose(el, g)
                if prod not in elements:
                    elements.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return frozenset(elements)


def generate(gens: Iterable[Permutation]) -> PermGroup:
    """The subgroup generated by ``gens`` (non-empty, common letter count)."""
    gens = list(gens)
    if not gens:
        raise PermutationError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise PermutationError("generators act on different letter counts")
    if n > MAX_LETTERS:
        raise PermutationError(f"letter count {n} exceeds the enumeration cap {MAX_LETTERS}")
    return PermGroup(n, _close(gens, n))


def symmetric_group(n: int) -> PermGroup:
    if not (1 <= n <= MAX_LETTERS):
        raise PermutationError(f"n must be in 1..{MAX_LETTERS}")
    if n == 1:
        return PermGroup(1, frozenset({Permutation.identity(1)}))
    gens = [Permutation.from_cycles(n, [(1, 2)]),
            Permutation.from_cycles(n, [tuple(range(1, n + 1))])]
    return generate(gens)


def _generating_set(group: PermGroup) -> list:
    """A small deterministic generating set extracted from the element list."""
    gens: list = []
    closure = frozenset({Permutation.identity(group.n)})
    for el in group.sorted_elements():
        if el not in closure:
            gens.append(el)
            closure = _close(gens, group.n)
            if len(closure) == group.order:
                break
    return gens


def derived_subgroup(group: PermGroup) -> PermGroup:
    """The subgroup generated by all commutators of ``group``.

    Computed as the normal closure of the commutators of a generating
    set, which equals the full pairwise-commutator closure; the
    brute-force definition is kept as a test oracle at small orders.
    """
    n = group.n
    gens = _generating_set(group)
    if not gens:
        return PermGroup(n, frozenset({Permutation.identity(n)}))
    identity = Permutation.identity(n)
    hgens = sorted({commutator_perm(a, b) for a in gens for b in gens} - {identity})
    if not hgens:
        return PermGroup(n, frozenset({identity}))
    closure = _close(hgens, n)
    changed = True
    while changed:
        changed = False
        for g in gens:
            ginv = g.inverse()
            for h in list(hgens):
                conj = compose(compose(g, h), ginv)
                if conj not in closure:
                    hgens.append(conj)
                    closure = _close(hgens, n)
                    changed = True
    return PermGroup(n, closure)


def derived_chain(group: PermGroup) -> list:
    """Groups of the chain G, [G,G], [[G,G],[G,G]], ... until it settles.

    The chain stops after reaching the trivial group, or repeats the
    stabilized order once when the commutator construction fixes a
    non-trivial group.
    """
    chain = [group]
    if group.order == 1:
        return chain
    while True:
        nxt = derived_subgroup(chain[-1])
        chain.append(nxt)
        if nxt.order == 1 or nxt.order == chain[-2].order:
            return chain


def derived_series(group: PermGroup) -> list:
    """Orders along the chain of iterated commutator subgroups."""
    return [g.order for g in derived_chain(group)]


def is_solvable(group: PermGroup) -> bool:
    """True iff the iterated commutator chain reaches the trivial group."""
    return derived_series(group)[-1] == 1


def nested_commutator(perms: Sequence[Permutation]) -> Permutation:
    """Balanced iterated commutator of 2**d leaves.

    Depth 1 is [a, b]; depth 2 is [[a, b], [c, d]]; and so on.
    """
    perms = list(perms)
    k = len(perms)
    if k == 0 or k & (k - 1):
        raise PermutationError(f"need a power-of-two leaf count, got {k}")
    if k == 1:
        return perms[0]
    half = k // 2
    return commutator_perm(nested_commutator(perms[:half]),
                           nested_commutator(perms[half:]))


def find_nested_commutator_witness(n: int, depth: int) -> Optional[list]:
    """Leaves whose balanced depth-``depth`` commutator is non-trivial, if any.

    Searches the full symmetric group on ``n`` letters level by level:
    the set of values realized by balanced commutators of each depth is
    enumerated together with one representative leaf tuple per value.
    Returns 2**depth leaf permutations, or None when every balanced
    commutator of that depth collapses to the identity.
    """
    if depth < 1:
        raise PermutationError("depth must be >= 1")
    sym = symmetric_group(n)
    identity = Permutation.identity(n)
    level = {el: (el,) for el in sym.sorted_elements()}
    for _ in range(depth):
        nxt: dict = {}
        reps = sorted(level)
        for u in reps:
            for v in reps:
                c = commutator_perm(u, v)
                if c not in nxt:
                    nxt[c] = level[u] + level[v]
        level = nxt
    witnesses = sorted(el for el in level if el != identity)
    if not witnesses:
        return None
    return list(level[witnesses[0]])
