"""Closure of a generating set of transformations, kernel, Rees decomposition.

The semigroup is generated breadth-first by word length with lexicographic
tie-breaking, which fixes a canonical element order used for every
deterministic choice downstream (in particular the base idempotent).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from math import gcd

from .errors import InputError, ResourceLimitError, StructuralInconsistencyError
from .transform import Transformation

DEFAULT_ELEMENT_CAP = 10**6


class Semigroup:
    """A composition-closed set of transformations with indexed products.

    ``elements`` is ordered canonically (BFS by word length, ties broken
    lexicographically on image tables). Immutable after construction.
    """

    def __init__(self, elements, index, generators, parent):
        self.elements = tuple(elements)
        self.index = index
        self.generators = tuple(generators)
        self._parent = parent

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, f):
        return f in self.index

    @property
    def n(self) -> int:
        return self.elements[0].n

    @property
    def generator_elements(self) -> tuple:
        return tuple(self.elements[i] for i in self.generators)

    def product(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j]."""
        return self.index[self.elements[i] * self.elements[j]]

    @cached_property
    def product_table(self) -> list:
        """Full Cayley table; materialize only for small semigroups."""
        size = len(self.elements)
        return [[self.product(i, j) for j in range(size)] for i in range(size)]

    def word_for(self, f: Transformation) -> list:
        """A shortest generator word [g_k, ..., g_1] with g_k * ... * g_1 == f."""
        if f not in self.index:
            raise InputError(f"{f.literal()} is not in the semigroup")
        word = []
        current = f
        while current is not None:
            g, parent = self._parent[current]
            word.append(g)
            current = parent
        return word


def generate(generators, *, cap: int = DEFAULT_ELEMENT_CAP) -> Semigroup:
    """Smallest composition-closed superset of the generators.

    Raises ResourceLimitError if the closure exceeds ``cap`` elements.
    """
    gens = sorted(set(generators))
    if not gens:
        raise InputError("need at least one generator")
    if len({g.n for g in gens}) != 1:
        raise InputError("generators must share one domain size")

    parent = {g: (g, None) for g in gens}
    elements = list(gens)
    frontier = list(gens)
    while frontier:
        fresh = {}
        for x in frontier:
            for g in gens:
                z = g * x
                if z not in parent and z not in fresh:
                    fresh[z] = (g, x)
        frontier = sorted(fresh)
        for z in frontier:
            parent[z] = fresh[z]
        elements.extend(frontier)
        if len(elements) > cap:
            raise ResourceLimitError(
                f"closure exceeded the element cap ({cap}); "
                "raise the cap to analyze this law"
            )
    index = {f: i for i, f in enumerate(elements)}
    return Semigroup(elements, index, range(len(gens)), parent)


def idempotents(semigroup: Semigroup) -> list:
    """All elements f with f*f == f, in canonical order."""
    return [f for f in semigroup if f.is_idempotent()]


def kernel(semigroup: Semigroup) -> tuple:
    """The unique minimal two-sided ideal: all elements of minimal rank.

    The rank criterion is cheap; the ideal property is re-verified against
    the generators (which implies it for the whole semigroup).
    """
    m = min(f.rank() for f in semigroup)
    ker = tuple(f for f in semigroup if f.rank() == m)
    kset = set(ker)
    for g in semigroup.generator_elements:
        for z in ker:
            if g * z not in kset or z * g not in kset:
                raise StructuralInconsistencyError(
                    "minimal-rank set is not an ideal; rank criterion violated"
                )
    return ker


@dataclass(frozen=True)
class ReesData:
    """Product decomposition kernel = L * G * R at a base idempotent e.

    ``H``, ``gamma``, ``C`` and ``p`` describe the cyclic coset structure of
    G and are filled in by the limit analysis via ``complete_rees``.
    """

    e: Transformation
    kernel: tuple
    L: tuple
    G: tuple
    R: tuple
    inverse: dict
    H: tuple = None
    gamma: Transformation = None
    C: tuple = None
    p: int = None
    coset_of: dict = None

    @property
    def kernel_set(self) -> frozenset:
        return frozenset(self.kernel)

    def inv(self, g: Transformation) -> Transformation:
        return self.inverse[g]

    def gamma_power(self, k: int) -> Transformation:
        """gamma^k with any integer exponent, reduced mod p."""
        return self.C[k % self.p]

    def ch_split(self, g: Transformation) -> tuple:
        """Split g in G uniquely as (gamma^j, h) with h in H."""
        j = self.coset_of[g]
        h = self.inv(self.C[j]) * g
        return self.C[j], h


def _element_order(g: Transformation, e: Transformation, bound: int) -> int:
    power = g
    for k in range(1, bound + 1):
        if power == e:
            return k
        power = power * g
    raise StructuralInconsistencyError(
        f"{g.literal()} has no power equal to the unit within {bound} steps"
    )


def rees_at(semigroup: Semigroup, ker: tuple, e: Transformation) -> ReesData:
    """Decompose the kernel at an idempotent e: L = E(Ke), G = eKe, R = E(eK).

    Verifies the group axioms for G, eL = Re = {e}, and the bijectivity of
    the product map L x G x R -> kernel.
    """
    kset = set(ker)
    if e not in kset:
        raise InputError(f"{e.literal()} is not in the kernel")
    if not e.is_idempotent():
        raise InputError(f"{e.literal()} is not idempotent")

    Ke = sorted({z * e for z in ker})
    eK = sorted({e * z for z in ker})
    L = tuple(z for z in Ke if z.is_idempotent())
    G = tuple(sorted({e * z * e for z in ker}))
    R = tuple(z for z in eK if z.is_idempotent())

    gset = set(G)
    for a in G:
        if a * e != a or e * a != a:
            raise StructuralInconsistencyError("unit law fails in the group factor")
        for b in G:
            if a * b not in gset:
                raise StructuralInconsistencyError("group factor is not closed")
    inverse = {}
    for g in G:
        order = _element_order(g, e, len(G))
        inverse[g] = e if order == 1 else g ** (order - 1)
        if g * inverse[g] != e or inverse[g] * g != e:
            raise StructuralInconsistencyError("inverse law fails in the group factor")

    if any(e * l != e for l in L) or any(r * e != e for r in R):
        raise StructuralInconsistencyError("eL = Re = {e} fails")

    seen = {}
    for l in L:
        for g in G:
            lg = l * g
            for r in R:
                z = lg * r
                if z in seen:
                    raise StructuralInconsistencyError("L x G x R product not injective")
                seen[z] = (l, g, r)
    if set(seen) != kset:
        raise StructuralInconsistencyError("L * G * R does not cover the kernel")

    return ReesData(e=e, kernel=ker, L=L, G=G, R=R, inverse=inverse)


def project(rd: ReesData, z: Transformation) -> tuple:
    """Coordinates (z_L, z_G, z_R) with z = z_L * z_G * z_R.

    Computed by the closed form z_G = eze, z_L = ze (eze)^-1,
    z_R = (eze)^-1 ez.
    """
    if z not in rd.kernel_set:
        raise InputError(f"{z.literal()} is not in the kernel")
    e = rd.e
    z_g = e * z * e
    inv = rd.inv(z_g)
    z_l = z * e * inv
    z_r = inv * e * z
    return z_l, z_g, z_r


def complete_rees(rd: ReesData, *, H, gamma, p) -> ReesData:
    """Attach the coset structure (H, gamma, C, p) and validate it."""
    H = tuple(sorted(H))
    hset = set(H)
    if rd.e not in hset:
        raise StructuralInconsistencyError("H does not contain the unit")
    for a in H:
        for b in H:
            if a * b not in hset:
                raise StructuralInconsistencyError("H is not closed under products")
    if any(rd.inv(h) not in hset for h in H):
        raise StructuralInconsistencyError("H is not closed under inverses")

    C = [rd.e]
    power = gamma
    for _ in range(p - 1):
        C.append(power)
        power = power * gamma
    if power != rd.e:
        raise StructuralInconsistencyError("gamma^p != e")

    completed = replace(
        rd, H=H, gamma=gamma, C=tuple(C), p=p, coset_of=None
    )
    cosets = coset_structure(completed)
    coset_of = {}
    for j, coset in enumerate(cosets):
        for g in coset:
            coset_of[g] = j
    return replace(completed, coset_of=coset_of)


def coset_structure(rd: ReesData) -> list:
    """The p cosets [H, gamma H, ..., gamma^(p-1) H]; checks they partition G
    and that H is normal in G."""
    if rd.H is None or rd.gamma is None or rd.p is None:
        raise InputError("coset structure requires H, gamma and p")
    hset = set(rd.H)
    for h in rd.H:
        for g in rd.G:
            if rd.inv(g) * h * g not in hset:
                raise StructuralInconsistencyError("H is not normal in G")
    cosets = []
    covered = set()
    for j in range(rd.p):
        coset = sorted(rd.C[j] * h for h in rd.H)
        if covered & set(coset):
            raise StructuralInconsistencyError("cosets of H are not disjoint")
        covered.update(coset)
        cosets.append(coset)
    if covered != set(rd.G):
        raise StructuralInconsistencyError("cosets of H do not cover G")
    return cosets


def left_states(rd: ReesData) -> list:
    """Ke = LG, the states of the left random walk z -> f*z, sorted."""
    return sorted({z * rd.e for z in rd.kernel})


def right_states(rd: ReesData) -> list:
    """eK = GR, the states of the right random walk z -> z*f, sorted."""
    return sorted({rd.e * z for z in rd.kernel})


def chain_period_and_classes(states, neighbors, start) -> tuple:
    """Period and cyclic classes of a strongly connected directed graph.

    ``neighbors`` maps a state to its successors. Returns (p, classes) where
    classes[j] holds the states at BFS distance = j mod p from ``start``.
    Raises if the graph is not strongly connected.
    """
    state_set = set(states)
    dist = {start: 0}
    queue = [start]
    while queue:
        nxt = []
        for u in queue:
            for v in neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        queue = nxt
    if set(dist) != state_set:
        raise StructuralInconsistencyError("walk on Ke is not irreducible (forward)")

    reverse = {s: [] for s in states}
    for u in states:
        for v in neighbors(u):
            reverse[v].append(u)
    seen = {start}
    queue = [start]
    while queue:
        nxt = []
        for u in queue:
            for v in reverse[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        queue = nxt
    if seen != state_set:
        raise StructuralInconsistencyError("walk on Ke is not irreducible (backward)")

    p = 0
    for u in states:
        for v in neighbors(u):
            p = gcd(p, dist[u] + 1 - dist[v])
    if p <= 0:
        raise StructuralInconsistencyError("could not determine a positive period")

    classes = [[] for _ in range(p)]
    for s in sorted(states):
        classes[dist[s] % p].append(s)
    if len({len(c) for c in classes}) != 1:
        raise StructuralInconsistencyError("cyclic classes have unequal sizes")
    return p, classes
