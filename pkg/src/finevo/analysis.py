"""End-to-end structural analysis of a mapping law."""

from __future__ import annotations

from dataclasses import dataclass

from .cliques import CliqueData, compute_W
from .errors import StructuralInconsistencyError
from .limits import (
    CyclicLimit,
    assemble_limits,
    left_factor,
    left_stationary,
    period_and_subgroup,
    right_factor,
    right_stationary,
)
from .measure import MappingLaw, RationalMeasure
from .semigroup import (
    DEFAULT_ELEMENT_CAP,
    ReesData,
    Semigroup,
    complete_rees,
    generate,
    kernel,
    rees_at,
)
from .transform import Transformation


@dataclass(frozen=True)
class Analysis:
    """Everything the reports and the simulator need about one law."""

    law: MappingLaw
    semigroup: Semigroup
    kernel: tuple
    m_mu: int
    rd: ReesData
    beta_left: RationalMeasure
    beta_right: RationalMeasure
    limits: CyclicLimit
    cliques: CliqueData
    e_word: list


def base_idempotent(semigroup: Semigroup, ker: tuple) -> Transformation:
    """The first idempotent of the kernel in canonical element order.

    Canonical order (BFS by word length, lexicographic ties) makes the
    choice deterministic; any choice yields an isomorphic decomposition.
    """
    kset = set(ker)
    for f in semigroup:
        if f in kset and f.is_idempotent():
            return f
    raise StructuralInconsistencyError("kernel contains no idempotent")


def analyze_law(law: MappingLaw, *, cap: int = DEFAULT_ELEMENT_CAP) -> Analysis:
    """Compute the full algebraic limit structure of a mapping law."""
    semigroup = generate(law.generators, cap=cap)
    ker = kernel(semigroup)
    m_mu = min(f.rank() for f in ker)
    e = base_idempotent(semigroup, ker)
    rd = rees_at(semigroup, ker, e)

    beta_left = left_stationary(law, rd)
    beta_right = right_stationary(law, rd)
    eta_L = left_factor(rd, beta_left)
    eta_R = right_factor(rd, beta_right)

    p, H, gamma = period_and_subgroup(law, rd)
    rd = complete_rees(rd, H=H, gamma=gamma, p=p)
    limits = assemble_limits(law, rd, eta_L, eta_R)
    cliques = compute_W(semigroup, ker, rd)
    e_word = semigroup.word_for(e)

    return Analysis(
        law=law,
        semigroup=semigroup,
        kernel=ker,
        m_mu=m_mu,
        rd=rd,
        beta_left=beta_left,
        beta_right=beta_right,
        limits=limits,
        cliques=cliques,
        e_word=e_word,
    )


def example_law() -> MappingLaw:
    """The built-in two-generator law on five points used by `finevo example`."""
    return MappingLaw.from_dict(
        {
            "n": 5,
            "generators": [[2, 3, 4, 1, 5], [2, 5, 5, 2, 4]],
            "weights": ["1/2", "1/2"],
        }
    )
