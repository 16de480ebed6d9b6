"""Deadlock pairs, maximal stable vertex sets, stable tuples and the
classification of invariant multiparticle laws.

A pair of states is a deadlock when no element of the semigroup merges it;
the images of kernel elements are exactly the maximal pairwise-deadlocked
sets, and the stable tuples (distinct tuples that stay distinct under every
element) are the orderings of those sets. The product map
L x G x W -> W_mu over a set W of orbit representatives is the coordinate
system for everything the simulator extracts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import ClassificationError, InputError, StructuralInconsistencyError
from .limits import CyclicLimit
from .measure import RationalMeasure, act_on_tuples, measure_product
from .semigroup import ReesData, Semigroup
from .transform import is_distinct


def is_deadlock(semigroup: Semigroup, x: int, y: int) -> bool:
    """True iff no element of the semigroup merges the two states."""
    if x == y:
        raise InputError("deadlock is defined for distinct states")
    return all(f(x) != f(y) for f in semigroup)


def deadlock_table(semigroup: Semigroup) -> dict:
    """Symmetric table of all deadlock pairs, computed in one sweep."""
    n = semigroup.n
    merged = set()
    for f in semigroup:
        for x in range(1, n + 1):
            for y in range(x + 1, n + 1):
                if (x, y) not in merged and f(x) == f(y):
                    merged.add((x, y))
    table = {}
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            table[(x, y)] = (x, y) not in merged
            table[(y, x)] = table[(x, y)]
    return table


def f_cliques(semigroup: Semigroup, ker: tuple) -> list:
    """The distinct image sets of kernel elements, as sorted tuples."""
    return sorted({tuple(sorted(g.image_set())) for g in ker})


@dataclass(frozen=True)
class CliqueData:
    """Stable tuples and their L x G x W coordinates."""

    m_mu: int
    f_cliques: tuple
    W_mu: tuple
    eW_mu: tuple
    W: tuple
    orbit_of: dict
    triples: dict

    def project_index(self, x: tuple) -> tuple:
        if x not in self.triples:
            raise InputError(f"tuple {x} is not a stable distinct tuple")
        return self.triples[x]


def compute_W(semigroup: Semigroup, ker: tuple, rd: ReesData) -> CliqueData:
    """Enumerate the stable tuples and fix a W with L x G x W bijective.

    Candidates are the orderings of the maximal stable sets, filtered by the
    stability requirement (every pair a deadlock, i.e. the image under every
    semigroup element stays distinct). W collects the lexicographically
    smallest representative of each G-orbit on e W_mu.
    """
    m_mu = min(f.rank() for f in ker)
    cliques = f_cliques(semigroup, ker)
    table = deadlock_table(semigroup)

    W_mu = []
    for clique in cliques:
        for cand in permutations(clique):
            if all(
                table[(a, b)]
                for i, a in enumerate(cand)
                for b in cand[i + 1 :]
            ):
                W_mu.append(cand)
    W_mu = tuple(sorted(W_mu))
    w_mu_set = set(W_mu)

    e = rd.e
    eW_mu = tuple(sorted({e.apply(x) for x in W_mu}))
    orbit_of = {}
    reps = []
    for x in eW_mu:
        if x in orbit_of:
            continue
        orbit = sorted(g.apply(x) for g in rd.G)
        rep = orbit[0]
        reps.append(rep)
        for y in orbit:
            if y in orbit_of and orbit_of[y] != rep:
                raise StructuralInconsistencyError("G-orbits on eW_mu overlap")
            orbit_of[y] = rep
    W = tuple(sorted(reps))

    triples = {}
    for l in rd.L:
        for g in rd.G:
            lg = l * g
            for w in W:
                x = lg.apply(w)
                if x in triples:
                    raise StructuralInconsistencyError(
                        "L x G x W product map is not injective"
                    )
                triples[x] = (l, g, w)
    if set(triples) != w_mu_set:
        raise StructuralInconsistencyError("L * G * W does not equal W_mu")

    return CliqueData(
        m_mu=m_mu,
        f_cliques=tuple(cliques),
        W_mu=W_mu,
        eW_mu=eW_mu,
        W=W,
        orbit_of=orbit_of,
        triples=triples,
    )


def project_tuple(rd: ReesData, cd: CliqueData, x: tuple) -> tuple:
    """Coordinates (x_L, x_G, x_W) of a stable tuple: x = (x_L * x_G)(x_W)."""
    return cd.project_index(x)


def stable_under_all(semigroup: Semigroup, x: tuple) -> bool:
    """Direct check of the stability definition: f(x) distinct for all f."""
    return all(is_distinct(f.apply(x)) for f in semigroup)


def invariant_law(
    limits: CyclicLimit, cd: CliqueData, Lambda_W: RationalMeasure
) -> RationalMeasure:
    """The invariant tuple law eta_L omega_G Lambda_W; verified fixed by mu."""
    wset = set(cd.W)
    for w in Lambda_W.support():
        if w not in wset:
            raise InputError(f"Lambda_W has mass at {w} outside W")
    omega_G = RationalMeasure.uniform(limits.rd.G)
    lam = measure_product([limits.eta_L, omega_G, Lambda_W])
    if act_on_tuples(limits.law.measure, lam) != lam:
        raise StructuralInconsistencyError("assembled law is not mu-invariant")
    return lam


@dataclass(frozen=True)
class InvariantFamily:
    """A shift-compatible family Lambda_k = sum_i c_i eta_L gamma^(k+i) omega_H Lambda_W^i."""

    limits: CyclicLimit
    c: tuple
    Lambda_W: tuple

    @property
    def p(self) -> int:
        return self.limits.p

    def law_at(self, k: int) -> RationalMeasure:
        rd = self.limits.rd
        omega_H = RationalMeasure.uniform(rd.H)
        terms = []
        for i, (ci, lam_w) in enumerate(zip(self.c, self.Lambda_W)):
            if ci == 0:
                continue
            piece = measure_product(
                [self.limits.eta_L, rd.gamma_power(k + i), omega_H, lam_w]
            )
            terms.append((ci, piece))
        return RationalMeasure.mix(terms)


def classify_family(
    limits: CyclicLimit, cd: CliqueData, Lambda_0: RationalMeasure
) -> InvariantFamily:
    """Decompose a one-time law into its cyclic family coefficients.

    The phase/W joint law under Lambda_0 determines (c_i, Lambda_W^i); the
    decomposition is validated by exact reassembly and by reproducing the
    recursion Lambda_k = mu Lambda_{k-1} over one full period.
    """
    rd = limits.rd
    w_mu_set = set(cd.W_mu)
    for x in Lambda_0.support():
        if x not in w_mu_set:
            raise InputError(f"law has mass at {x} outside the stable tuples")

    joint = {}
    for x, wgt in Lambda_0.items():
        _, g, w = cd.project_index(x)
        j = rd.coset_of[g]
        joint[(j, w)] = joint.get((j, w), Fraction(0)) + wgt

    c = []
    lambdas = []
    for i in range(rd.p):
        ci = sum((v for (j, _), v in joint.items() if j == i), Fraction(0))
        c.append(ci)
        if ci > 0:
            lambdas.append(
                RationalMeasure(
                    {w: v / ci for (j, w), v in joint.items() if j == i}
                )
            )
        else:
            lambdas.append(RationalMeasure.point(cd.W[0]))

    family = InvariantFamily(limits=limits, c=tuple(c), Lambda_W=tuple(lambdas))

    rebuilt = family.law_at(0)
    if rebuilt != Lambda_0:
        residual = {}
        for x in set(rebuilt.support()) | set(Lambda_0.support()):
            if rebuilt[x] != Lambda_0[x]:
                residual[x] = (Lambda_0[x], rebuilt[x])
        raise ClassificationError(
            "law is not of the cyclic family form", residual=residual
        )
    current = Lambda_0
    for k in range(1, rd.p + 1):
        current = act_on_tuples(limits.law.measure, current)
        if current != family.law_at(k):
            raise ClassificationError(
                f"family recursion fails at step {k}", residual={}
            )
    return family
