"""Exact limit structure of convolution powers of a mapping law.

The convolution powers of a law never stabilize support-wise (transient
elements keep positive mass forever), so the limit cycle is computed
structurally: stationary solves on the left/right kernel walks give the
boundary factors, the cyclic classes of the left walk give the period p,
the subgroup H and the coset generator gamma, and the cycle is assembled
from the closed-form factorization. A double-precision power iteration is
kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import StructuralInconsistencyError
from .measure import MappingLaw, RationalMeasure, convolve, measure_product
from .semigroup import (
    ReesData,
    chain_period_and_classes,
    generate,
    left_states,
    project,
    right_states,
)


def _pivot_size(value: Fraction) -> int:
    return value.numerator.bit_length() + value.denominator.bit_length()


def solve_stationary(matrix: list) -> list:
    """Unique probability vector pi with pi P = pi, by exact elimination.

    ``matrix`` is a row-stochastic list of Fraction rows. The balance
    equations (P^T - I) pi = 0 are solved with the normalization sum(pi) = 1
    replacing one equation; pivots are chosen among nonzero candidates with
    the smallest numerator/denominator bit size to limit coefficient growth.
    Raises StructuralInconsistencyError on rank deficiency.
    """
    m = len(matrix)
    one = Fraction(1)
    rows = []
    for j in range(m):
        row = [matrix[i][j] - (one if i == j else 0) for i in range(m)]
        row.append(Fraction(0))
        rows.append(row)
    rows[m - 1] = [one] * m + [one]

    for col in range(m):
        pivot_row = None
        best = None
        for r in range(col, m):
            v = rows[r][col]
            if v != 0:
                size = _pivot_size(v)
                if best is None or size < best:
                    best = size
                    pivot_row = r
        if pivot_row is None:
            raise StructuralInconsistencyError(
                "stationary system is rank deficient; fixed point not unique"
            )
        rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
        pivot = rows[col][col]
        rows[col] = [v / pivot for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]

    pi = [rows[i][m] for i in range(m)]
    if sum(pi) != 1 or any(v < 0 for v in pi):
        raise StructuralInconsistencyError("stationary solve produced an invalid vector")
    return pi


def _stationary_measure(states, step_pairs) -> RationalMeasure:
    """Stationary law of the walk state -> f*state (or state*f).

    ``step_pairs`` yields (state, next_state, weight) triples.
    """
    index = {s: i for i, s in enumerate(states)}
    m = len(states)
    matrix = [[Fraction(0)] * m for _ in range(m)]
    for s, t, w in step_pairs:
        matrix[index[s]][index[t]] += w
    pi = solve_stationary(matrix)
    return RationalMeasure({s: pi[index[s]] for s in states if pi[index[s]] > 0})


def left_stationary(law: MappingLaw, rd: ReesData) -> RationalMeasure:
    """The unique law beta on Ke fixed under beta -> mu * beta."""
    states = left_states(rd)
    pairs = [
        (z, f * z, w)
        for z in states
        for f, w in law.measure.items()
    ]
    beta = _stationary_measure(states, pairs)
    if convolve(law.measure, beta) != beta:
        raise StructuralInconsistencyError("left stationary law is not mu-invariant")
    return beta


def right_stationary(law: MappingLaw, rd: ReesData) -> RationalMeasure:
    """The unique law on eK fixed under beta -> beta * mu."""
    states = right_states(rd)
    pairs = [
        (z, z * f, w)
        for z in states
        for f, w in law.measure.items()
    ]
    beta = _stationary_measure(states, pairs)
    if convolve(beta, law.measure) != beta:
        raise StructuralInconsistencyError("right stationary law is not mu-invariant")
    return beta


def left_factor(rd: ReesData, beta: RationalMeasure) -> RationalMeasure:
    """Marginal of the L-coordinate of a law supported in Ke."""
    acc = {}
    for z, w in beta.items():
        z_l, _, _ = project(rd, z)
        acc[z_l] = acc.get(z_l, Fraction(0)) + w
    return RationalMeasure(acc)


def right_factor(rd: ReesData, beta: RationalMeasure) -> RationalMeasure:
    """Marginal of the R-coordinate of a law supported in eK."""
    acc = {}
    for z, w in beta.items():
        _, _, z_r = project(rd, z)
        acc[z_r] = acc.get(z_r, Fraction(0)) + w
    return RationalMeasure(acc)


def period_and_subgroup(law: MappingLaw, rd: ReesData) -> tuple:
    """Period p, subgroup H and coset generator gamma from the left walk.

    The cyclic class of e on Ke has G-parts exactly H; the successor class
    has G-parts gamma H, and gamma is the canonically smallest element of
    that coset with gamma^p = e.
    """
    states = left_states(rd)
    gens = [f for f, _ in law.measure.items()]
    succ = {z: sorted({f * z for f in gens}) for z in states}
    p, classes = chain_period_and_classes(states, lambda z: succ[z], rd.e)

    e = rd.e
    H = sorted({e * z * e for z in classes[0]})
    if len(H) * p != len(rd.G):
        raise StructuralInconsistencyError("|H| * p != |G|")

    if p == 1:
        return p, tuple(H), e

    coset = sorted({e * z * e for z in classes[1]})
    if len(coset) != len(H):
        raise StructuralInconsistencyError("successor coset has wrong size")
    candidates = [g for g in coset if g**p == e]
    if not candidates:
        raise StructuralInconsistencyError("no order-p representative in the coset")
    return p, tuple(H), candidates[0]


@dataclass(frozen=True)
class CyclicLimit:
    """The limit cycle of convolution powers and its exact factorization."""

    law: MappingLaw
    rd: ReesData
    p: int
    eta_L: RationalMeasure
    eta_R: RationalMeasure
    eta: RationalMeasure
    cycle: tuple
    nu: RationalMeasure


def assemble_limits(
    law: MappingLaw, rd: ReesData, eta_L: RationalMeasure, eta_R: RationalMeasure
) -> CyclicLimit:
    """Build cycle[k] = eta_L gamma^k omega_H eta_R and the averaged limit nu.

    Every structural identity of the limit cycle is verified exactly before
    the result is returned.
    """
    omega_H = RationalMeasure.uniform(rd.H)
    cycle = tuple(
        measure_product([eta_L, rd.C[k], omega_H, eta_R]) for k in range(rd.p)
    )
    eta = cycle[0]
    nu = RationalMeasure.mix((Fraction(1, rd.p), c) for c in cycle)

    mu = law.measure
    if convolve(eta, eta) != eta:
        raise StructuralInconsistencyError("eta * eta != eta")
    for k in range(rd.p):
        if convolve(mu, cycle[k]) != cycle[(k + 1) % rd.p]:
            raise StructuralInconsistencyError("mu * cycle[k] != cycle[k+1]")
    if convolve(nu, nu) != nu:
        raise StructuralInconsistencyError("nu * nu != nu")
    if convolve(mu, nu) != nu or convolve(nu, mu) != nu:
        raise StructuralInconsistencyError("nu is not mu-invariant")
    if set(nu.support()) != rd.kernel_set:
        raise StructuralInconsistencyError("supp(nu) != kernel")
    lhr = {l * h * r for l in rd.L for h in rd.H for r in rd.R}
    if set(eta.support()) != lhr:
        raise StructuralInconsistencyError("supp(eta) != L H R")
    covered = set()
    for k in range(rd.p):
        supp = set(cycle[k].support())
        if covered & supp:
            raise StructuralInconsistencyError("cycle supports are not disjoint")
        covered |= supp
    return CyclicLimit(
        law=law, rd=rd, p=rd.p, eta_L=eta_L, eta_R=eta_R, eta=eta, cycle=cycle, nu=nu
    )


def float_step(law: MappingLaw, vec: dict) -> dict:
    """One convolution power in double precision: vec -> mu * vec."""
    out = {}
    for f, wf in law.measure.items():
        w = float(wf)
        for z, v in vec.items():
            fz = f * z
            out[fz] = out.get(fz, 0.0) + w * v
    return out


def float_sup_distance(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)


def _indexed_iteration(law: MappingLaw):
    """Vectorized left-convolution step over the indexed closure.

    Returns (elements, v0, step) where step maps a weight vector for mu^n
    to the one for mu^(n+1).
    """
    semigroup = generate(law.generators)
    elements = semigroup.elements
    index = semigroup.index
    tables = []
    weights = []
    for f, w in law.measure.items():
        tables.append(np.array([index[f * s] for s in elements], dtype=np.intp))
        weights.append(float(w))
    v0 = np.zeros(len(elements))
    for f, w in law.measure.items():
        v0[index[f]] = float(w)

    def step(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        for table, w in zip(tables, weights):
            np.add.at(out, table, w * v)
        return out

    return elements, v0, step


@dataclass
class FloatLimitEstimate:
    converged: bool
    p_est: int
    eta_est: dict
    nu_est: dict
    iterations: int


def float_limit_oracle(
    law: MappingLaw,
    tol: float = 1e-12,
    *,
    max_iter: int = 100_000,
    max_lag: int = 64,
) -> FloatLimitEstimate:
    """Brute-force limit detection by iterating convolution powers.

    Iterates mu^n in double precision until the sequence repeats at some lag
    q <= max_lag within ``tol``; the lag is the period estimate, the iterate
    at an index divisible by q estimates the cycle unit eta, and the average
    over one period estimates nu. Independent of the exact path.

    An oscillating transient can push a larger lag under ``tol`` before the
    true one, so after the first detection the iteration continues to twice
    the detection index (squaring the residual transient) and the smallest
    lag that holds at the final iterate is reported.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    elements, vec, step = _indexed_iteration(law)
    history = [(1, vec)]
    settle_until = None
    for n in range(2, max_iter + 1):
        vec = step(vec)
        history.append((n, vec))
        if len(history) > max_lag + 1:
            history.pop(0)
        if settle_until is None:
            for q in range(1, len(history)):
                if np.max(np.abs(vec - history[-1 - q][1])) < tol:
                    settle_until = min(max(2 * n, n + q), max_iter)
                    break
        if settle_until is not None and n >= settle_until:
            for q in range(1, len(history)):
                if np.max(np.abs(vec - history[-1 - q][1])) < tol:
                    cycle = history[-q:]
                    eta_vec = next(v for m, v in cycle if m % q == 0)
                    nu_vec = sum(v for _, v in cycle) / q
                    eta_est = {
                        s: float(x) for s, x in zip(elements, eta_vec) if x != 0.0
                    }
                    nu_est = {
                        s: float(x) for s, x in zip(elements, nu_vec) if x != 0.0
                    }
                    return FloatLimitEstimate(True, q, eta_est, nu_est, n)
            settle_until = None  # lost the repetition; keep iterating
    return FloatLimitEstimate(False, 0, {}, {}, max_iter)


def cesaro_average(law: MappingLaw, n: int) -> dict:
    """Running average (1/n) sum_{k=1..n} mu^k in double precision."""
    elements, vec, step = _indexed_iteration(law)
    acc = vec.copy()
    for _ in range(n - 1):
        vec = step(vec)
        acc += vec
    acc /= n
    return {s: float(x) for s, x in zip(elements, acc) if x != 0.0}


def exact_vs_float_sup(exact: RationalMeasure, approx: dict) -> float:
    keys = set(exact.support()) | set(approx)
    return float(max(abs(float(exact[k]) - approx.get(k, 0.0)) for k in keys))
