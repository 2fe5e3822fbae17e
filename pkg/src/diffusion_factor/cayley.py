"""Power tables, repetition detection and the weighted Cayley graphs the walk runs on.

Two constructions produce the same graph up to relabelling: the multiplicative
one over ``<b> mod N`` (built without knowing ``ord(b)``) and the additive
model over ``Z/r`` with generators ``+-2**j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import NotAUnit
from .numtheory import exponent_bound, gcd, mod_inverse


@dataclass(frozen=True)
class PowerTable:
    base: int
    modulus: int
    M: int
    plus_powers: tuple[int, ...]
    minus_powers: tuple[int, ...]

    @property
    def s_set(self) -> tuple[int, ...]:
        """All ``2(M+1)`` entries, plus powers first (duplicates kept)."""
        return self.plus_powers + self.minus_powers

    @property
    def squarings(self) -> int:
        return 2 * self.M


def build_power_table(a: int, modulus: int) -> PowerTable:
    """``a**(+-2**t) mod N`` for ``t = 0..M`` by repeated squaring.

    Args:
        a: a unit modulo ``modulus``.
        modulus: N >= 3.

    Raises:
        NotAUnit: if ``gcd(a, N) > 1``.
    """
    if modulus < 3:
        raise ValueError("modulus must be >= 3")
    a %= modulus
    if gcd(a, modulus) != 1:
        raise NotAUnit(f"{a} is not a unit modulo {modulus}")
    M = exponent_bound(modulus)
    plus, minus = [a], [mod_inverse(a, modulus)]
    for _ in range(M):
        plus.append(plus[-1] * plus[-1] % modulus)
        minus.append(minus[-1] * minus[-1] % modulus)
    return PowerTable(a, modulus, M, tuple(plus), tuple(minus))


@dataclass(frozen=True)
class RepetitionWitness:
    """A coincidence ``a**(2**l) == a**(sign * 2**l_prime)`` inside the power table.

    ``a**(2**power * q) == 1`` always holds with ``q`` odd. Normally ``power``
    equals ``l_prime``; the one exception is ``a**(2**l) == a**(-2**l)``,
    which gives ``q = 1`` and ``power = l + 1``.
    """

    l: int
    l_prime: int
    sign: int
    q: int
    power: int


def _witness(l: int, l_prime: int, sign: int) -> RepetitionWitness:
    hi, lo = max(l, l_prime), min(l, l_prime)
    if sign > 0:
        return RepetitionWitness(hi, lo, 1, (1 << (hi - lo)) - 1, lo)
    if hi == lo:
        return RepetitionWitness(hi, lo, -1, 1, hi + 1)
    return RepetitionWitness(hi, lo, -1, (1 << (hi - lo)) + 1, lo)


def find_repetition(table: PowerTable) -> RepetitionWitness | None:
    """First repetition in the S-set, or None when all ``2(M+1)`` values are distinct.

    Coincidences among the plus powers are searched first, in order of the
    larger index and then the smaller one. Only when there are none are
    plus/minus coincidences considered, taking the pair with the smallest
    index sum (plus index larger on ties).
    """
    plus, minus = table.plus_powers, table.minus_powers
    first_seen: dict[int, int] = {}
    for i, x in enumerate(plus):
        if x in first_seen:
            return _witness(i, first_seen[x], 1)
        first_seen[x] = i

    best = None
    for j, y in enumerate(minus):
        i = first_seen.get(y)
        if i is None:
            continue
        key = (i + j, 0 if i >= j else 1)
        if best is None or key < best[0]:
            best = (key, i, j)
    if best is None:
        return None
    _, i, j = best
    return _witness(i, j, -1)


def weight_alpha(table: PowerTable) -> dict[int, int]:
    """Multiplicity of each distinct generator among the ``2(M+1)`` S-set entries.

    Iteration order follows first appearance in :attr:`PowerTable.s_set`.
    """
    weights: dict[int, int] = {}
    for s in table.s_set:
        weights[s] = weights.get(s, 0) + 1
    return weights


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    """A weighted Cayley graph on a cyclic group, vertex 0 being the identity.

    For the multiplicative construction ``vertices`` holds residues mod
    ``modulus`` (= N); for the additive model it holds ``0..r-1`` and
    ``modulus`` is ``r``. ``neighbors[i]`` lists ``(j, w(i, j))`` with one
    entry per distinct generator, so parallel edges show up as weights.
    """

    vertices: tuple[int, ...]
    neighbors: tuple[tuple[tuple[int, int], ...], ...]
    degree: int
    generator_weights: dict[int, int]
    M: int
    modulus: int
    additive: bool = False
    index: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.vertices)

    def vertex_id(self, element: int) -> int:
        return self.index[element % self.modulus]

    def row_weight(self, i: int) -> int:
        return sum(w for _, w in self.neighbors[i])

    def adjacency_matrix(self) -> np.ndarray:
        """Dense weighted adjacency matrix (test helper; small graphs only)."""
        r = self.order
        A = np.zeros((r, r), dtype=np.int64)
        for i, row in enumerate(self.neighbors):
            for j, w in row:
                A[i, j] += w
        return A

    @cached_property
    def walk_matrix(self) -> sp.csr_matrix:
        """Sparse half-lazy operator ``W = (I + A/d) / 2``."""
        r = self.order
        rows, cols, vals = [], [], []
        for i, row in enumerate(self.neighbors):
            for j, w in row:
                rows.append(i)
                cols.append(j)
                vals.append(w / (2 * self.degree))
        A = sp.csr_matrix((vals, (rows, cols)), shape=(r, r))
        W = (A + 0.5 * sp.identity(r, format="csr")).tocsr()
        W.sum_duplicates()
        return W


def _close(identity: int, generators: dict[int, int], op, modulus: int, M: int,
           additive: bool) -> CayleyGraph:
    vertices = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = op(x, s)
            if y not in index:
                index[y] = len(vertices)
                vertices.append(y)
                queue.append(y)
    neighbors = tuple(
        tuple((index[op(x, s)], w) for s, w in generators.items()) for x in vertices
    )
    degree = sum(generators.values())
    # 2**t is never 0 mod an odd r > 1, so odd-order graphs carry no loops
    if len(vertices) > 1 and len(vertices) % 2:
        assert all(j != i for i, row in enumerate(neighbors) for j, _ in row), "self-loop"
    return CayleyGraph(tuple(vertices), neighbors, degree, dict(generators), M,
                       modulus, additive, index)


def build_cayley_graph(b: int, modulus: int) -> CayleyGraph:
    """Discover ``<b> mod N`` by breadth-first closure from 1 under the S-set generators.

    The vertex count equals ``ord_N(b)`` but is never assumed in advance.
    """
    table = build_power_table(b, modulus)
    weights = weight_alpha(table)
    return _close(1, weights, lambda x, s: x * s % modulus, modulus, table.M, False)


def additive_model(r: int, M: int) -> CayleyGraph:
    """``Cay(Z/r, {+-2**j : j = 0..M}, alpha)`` with vertices in natural order."""
    if r < 1 or r % 2 == 0:
        raise ValueError(f"r must be a positive odd integer, got {r}")
    if M < 1:
        raise ValueError("M must be >= 1")
    weights: dict[int, int] = {}
    for s in [pow(2, j, r) for j in range(M + 1)] + [-pow(2, j, r) % r for j in range(M + 1)]:
        weights[s] = weights.get(s, 0) + 1
    neighbors = tuple(
        tuple(((x + s) % r, w) for s, w in weights.items()) for x in range(r)
    )
    if r > 1:
        assert 0 not in weights, "self-loop"
    return CayleyGraph(tuple(range(r)), neighbors, 2 * (M + 1), weights, M, r, True,
                       {x: x for x in range(r)})
