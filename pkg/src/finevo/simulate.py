"""Seeded simulation of multiparticle evolutions and the verification
battery for the factor processes extracted from them.

A path carries the driving maps N_k, the observed tuples X_k and the derived
factor series (L-, G-, phase-, H- and W-parts; the G-increments; the path
constants). The replication harness realizes the infinite past by starting
each window from the exact stationary law, and derives per-replication RNG
substreams from a counter-based 64-bit generator keyed as seed XOR index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import example_law
from .cliques import CliqueData, InvariantFamily, invariant_law, project_tuple
from .errors import InputError
from .limits import CyclicLimit
from .measure import RationalMeasure, coordinate_marginal
from .stats import Check, VerificationReport, chi_square_gof, chi_square_independence
from .transform import Transformation

MAX_SEED = 2**64


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; substreams use seed XOR replication index."""
    if not isinstance(seed, int) or not 0 <= seed < MAX_SEED:
        raise InputError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(key=seed))


def draw(measure: RationalMeasure, rng: np.random.Generator):
    """One sample from a rational measure, walking its canonical order."""
    u = rng.random()
    acc = 0.0
    items = measure.items()
    for x, w in items:
        acc += float(w)
        if u < acc:
            return x
    return items[-1][0]


@dataclass
class EvolutionPath:
    """A sampled trajectory with all derived factor processes.

    Lists are indexed by k - k_min; N[i] is the map driving the step into
    time k_min + 1 + i, so ``X[i+1] == N[i](X[i])``.
    """

    k_min: int
    k_max: int
    seed: int
    N: list
    X: list
    X_L: list
    X_G: list
    X_C: list
    X_H: list
    X_W: list
    M_G: list
    Y_C: Transformation
    Z_W: tuple

    def index(self, k: int) -> int:
        if not self.k_min <= k <= self.k_max:
            raise InputError(f"time {k} outside path range [{self.k_min}, {self.k_max}]")
        return k - self.k_min

    def x_at(self, k: int) -> tuple:
        return self.X[self.index(k)]

    def n_at(self, k: int) -> Transformation:
        """The driving map of the step into time k."""
        if not self.k_min < k <= self.k_max:
            raise InputError(f"no driving map at time {k}")
        return self.N[k - self.k_min - 1]


def _derive_path(
    limits: CyclicLimit, cd: CliqueData, k_min, k_max, seed, x0, maps
) -> EvolutionPath:
    rd = limits.rd
    X = [x0]
    for f in maps:
        X.append(f.apply(X[-1]))

    X_L, X_G, X_C, X_H, X_W = [], [], [], [], []
    for x in X:
        l, g, w = project_tuple(rd, cd, x)
        c, h = rd.ch_split(g)
        X_L.append(l)
        X_G.append(g)
        X_C.append(c)
        X_H.append(h)
        X_W.append(w)

    M_G = [X_G[i + 1] * rd.inv(X_G[i]) for i in range(len(maps))]
    Y_C = rd.gamma_power(-k_min) * X_C[0]
    return EvolutionPath(
        k_min=k_min,
        k_max=k_max,
        seed=seed,
        N=list(maps),
        X=X,
        X_L=X_L,
        X_G=X_G,
        X_C=X_C,
        X_H=X_H,
        X_W=X_W,
        M_G=M_G,
        Y_C=Y_C,
        Z_W=X_W[0],
    )


def sample_stationary(
    limits: CyclicLimit,
    cd: CliqueData,
    Lambda_W: RationalMeasure,
    k_min: int,
    k_max: int,
    seed: int,
) -> EvolutionPath:
    """A stationary path: X_{k_min} ~ eta_L omega_G Lambda_W by three
    independent draws, then the recursion X_k = N_k X_{k-1} with iid maps."""
    if k_min >= k_max:
        raise InputError("k_min must be less than k_max")
    wset = set(cd.W)
    for w in Lambda_W.support():
        if w not in wset:
            raise InputError(f"Lambda_W has mass at {w} outside W")
    rng = make_rng(seed)
    rd = limits.rd
    omega_G = RationalMeasure.uniform(rd.G)
    l = draw(limits.eta_L, rng)
    g = draw(omega_G, rng)
    w = draw(Lambda_W, rng)
    x0 = (l * g).apply(w)
    maps = [draw(limits.law.measure, rng) for _ in range(k_max - k_min)]
    return _derive_path(limits, cd, k_min, k_max, seed, x0, maps)


def sample_nonstationary(
    limits: CyclicLimit,
    cd: CliqueData,
    family: InvariantFamily,
    k_min: int,
    k_max: int,
    seed: int,
) -> EvolutionPath:
    """A path of the cyclic family: draw the phase index i with probability
    c_i, then X_{k_min} ~ eta_L gamma^(k_min+i) omega_H Lambda_W^i."""
    if k_min >= k_max:
        raise InputError("k_min must be less than k_max")
    rng = make_rng(seed)
    rd = limits.rd
    u = rng.random()
    acc = 0.0
    i = len(family.c) - 1
    for idx, ci in enumerate(family.c):
        acc += float(ci)
        if u < acc:
            i = idx
            break
    w = draw(family.Lambda_W[i], rng)
    l = draw(limits.eta_L, rng)
    h = draw(RationalMeasure.uniform(rd.H), rng)
    x0 = (l * rd.gamma_power(k_min + i) * h).apply(w)
    maps = [draw(limits.law.measure, rng) for _ in range(k_max - k_min)]
    return _derive_path(limits, cd, k_min, k_max, seed, x0, maps)


def verify_path_exact(path: EvolutionPath, limits: CyclicLimit, cd: CliqueData) -> list:
    """The per-path exact invariants; every step of the path is checked."""
    rd = limits.rd
    checks = []
    steps = len(path.N)

    bad = sum(
        1 for i in range(steps) if path.X[i + 1] != path.N[i].apply(path.X[i])
    )
    checks.append(
        Check("path recursion X_k = N_k X_{k-1}", "exact", bad == 0,
              note=f"{steps} steps")
    )

    bad = sum(1 for x in path.X if x not in cd.triples)
    checks.append(
        Check("X_k in L G W", "exact", bad == 0, note=f"{len(path.X)} states")
    )

    bad = sum(1 for w in path.X_W if w != path.Z_W)
    checks.append(Check("X_W constant along the path", "exact", bad == 0))

    bad = 0
    for i, c in enumerate(path.X_C):
        k = path.k_min + i
        if c != rd.gamma_power(k) * path.Y_C:
            bad += 1
    checks.append(Check("X^C_k = gamma^k Y_C", "exact", bad == 0))

    bad_inc = 0
    bad_phase = 0
    for i in range(steps):
        e = rd.e
        z = path.N[i] * path.X_L[i]
        expected = e * z * e
        if path.M_G[i] != expected:
            bad_inc += 1
        c, _ = rd.ch_split(path.M_G[i])
        if c != rd.gamma_power(1):
            bad_phase += 1
    checks.append(
        Check("M^G_k = (N_k X^L_{k-1})^G", "exact", bad_inc == 0)
    )
    checks.append(Check("(M^G_k)^C = gamma", "exact", bad_phase == 0))
    return checks


def verify_factorization(
    path: EvolutionPath, limits: CyclicLimit, k: int, j_values=None
) -> Check:
    """Recompose X_j from the stored factors for every j <= k and compare.

    Checks X_j = X_j^L (M^G_{k,j})^{-1} (gamma^k Y_C) U^H_k Z_W, with the
    increment products M^G_{k,j} rebuilt from the stored M^G series.
    """
    rd = limits.rd
    idx_k = path.index(k)
    phase = rd.gamma_power(k) * path.Y_C * path.X_H[idx_k]

    m_kj = rd.e  # M^G_{k,k}
    wanted = set(j_values) if j_values is not None else None
    compared = 0
    bad = 0
    for j in range(k, path.k_min - 1, -1):
        if j < k:
            m_kj = m_kj * path.M_G[path.index(j)]  # append M^G_{j+1}
        if wanted is not None and j not in wanted:
            continue
        idx_j = path.index(j)
        rhs = (path.X_L[idx_j] * rd.inv(m_kj) * phase).apply(path.Z_W)
        compared += 1
        if rhs != path.X[idx_j]:
            bad += 1
    return Check(
        "factorization X_j = X_j^L (M^G_{k,j})^-1 (gamma^k Y_C) U^H_k Z_W",
        "exact",
        bad == 0,
        note=f"{compared} (j,k) pairs at k={k}",
    )


def _substream_paths(limits, cd, Lambda_W, replications, k, window, seed):
    k_min = k - window
    for r in range(replications):
        yield sample_stationary(limits, cd, Lambda_W, k_min, k, seed ^ r)


def verify_third_noise(
    limits: CyclicLimit,
    cd: CliqueData,
    Lambda_W: RationalMeasure,
    *,
    replications: int,
    k: int = 0,
    window: int = 3,
    seed: int,
    alpha: float = 0.001,
    check_exact: bool = False,
) -> VerificationReport:
    """Distributional checks of the third noise across replications.

    Tests (a) uniformity of U^H_k on H, (b) uniformity of Y_C on C,
    (c) pairwise independence among U^H_k, the remote-past pair (Y_C, Z_W)
    and the width-``window`` N-window, (d) the joint law of (Y_C, Z_W)
    against the product of the uniform phase law and Lambda_W. Sigma-field
    independence is operationalized against finite N-windows.
    """
    if replications < 1000:
        raise InputError("third-noise verification needs at least 1000 replications")
    rd = limits.rd
    report = VerificationReport(
        replications=replications,
        seed=seed,
        alpha=alpha,
        config={"k": k, "window": window, "mode": "stationary"},
    )

    u_counts = {}
    yc_counts = {}
    yz_counts = {}
    pair_u_yz = {}
    pair_u_nw = {}
    pair_yz_nw = {}
    exact_bad = 0
    for path in _substream_paths(limits, cd, Lambda_W, replications, k, window, seed):
        idx = path.index(k)
        u = path.X_H[idx]
        yc = path.Y_C
        yz = (path.Y_C, path.Z_W)
        nw = tuple(path.N)
        u_counts[u] = u_counts.get(u, 0) + 1
        yc_counts[yc] = yc_counts.get(yc, 0) + 1
        yz_counts[yz] = yz_counts.get(yz, 0) + 1
        pair_u_yz[(u, yz)] = pair_u_yz.get((u, yz), 0) + 1
        pair_u_nw[(u, nw)] = pair_u_nw.get((u, nw), 0) + 1
        pair_yz_nw[(yz, nw)] = pair_yz_nw.get((yz, nw), 0) + 1
        if check_exact and any(
            not c.passed for c in verify_path_exact(path, limits, cd)
        ):
            exact_bad += 1

    if check_exact:
        report.add(
            Check("per-replication exact path invariants", "exact", exact_bad == 0,
                  note=f"{replications} replications")
        )

    uniform_h = {h: Fraction(1, len(rd.H)) for h in rd.H}
    report.add(
        chi_square_gof(u_counts, uniform_h, replications, alpha, "U^H_k uniform on H")
    )
    uniform_c = {c: Fraction(1, rd.p) for c in rd.C}
    report.add(
        chi_square_gof(yc_counts, uniform_c, replications, alpha, "Y_C uniform on C")
    )
    joint = {
        (c, w): Fraction(1, rd.p) * Lambda_W[w]
        for c in rd.C
        for w in Lambda_W.support()
    }
    report.add(
        chi_square_gof(
            yz_counts, joint, replications, alpha,
            "(Y_C, Z_W) joint = omega_C x Lambda_W",
        )
    )
    report.add(
        chi_square_independence(pair_u_yz, alpha, "U^H_k independent of (Y_C, Z_W)")
    )
    report.add(
        chi_square_independence(pair_u_nw, alpha, "U^H_k independent of N-window")
    )
    report.add(
        chi_square_independence(
            pair_yz_nw, alpha, "(Y_C, Z_W) independent of N-window"
        )
    )
    return report


def verify_nonstationary_joint(
    limits: CyclicLimit,
    cd: CliqueData,
    family: InvariantFamily,
    *,
    replications: int,
    k_min: int = 0,
    steps: int = 3,
    seed: int,
    alpha: float = 0.001,
) -> VerificationReport:
    """Empirical joint of (Y_C, Z_W) against c_i Lambda_W^i{w} for a family."""
    if replications < 1000:
        raise InputError("joint verification needs at least 1000 replications")
    rd = limits.rd
    report = VerificationReport(
        replications=replications,
        seed=seed,
        alpha=alpha,
        config={"k_min": k_min, "steps": steps, "mode": "nonstationary"},
    )
    counts = {}
    for r in range(replications):
        path = sample_nonstationary(
            limits, cd, family, k_min, k_min + steps, seed ^ r
        )
        key = (path.Y_C, path.Z_W)
        counts[key] = counts.get(key, 0) + 1
    expected = {}
    for i, ci in enumerate(family.c):
        if ci == 0:
            continue
        for w, v in family.Lambda_W[i].items():
            expected[(rd.gamma_power(i), w)] = (
                expected.get((rd.gamma_power(i), w), Fraction(0)) + ci * v
            )
    report.add(
        chi_square_gof(
            counts, expected, replications, alpha,
            "(Y_C, Z_W) joint = c_i Lambda_W^i",
        )
    )
    return report


def mono_projection_events(limits: CyclicLimit):
    """The five event identities tying the first coordinate of the observed
    tuple to (X^L, U^G(2)) for the built-in example law."""
    rd = limits.rd
    e = rd.e
    fe = next(l for l in rd.L if l != e)
    return {
        1: (fe, 4),
        2: (e, 2),
        3: (fe, 2),
        4: (e, 4),
        5: (None, 5),  # X^1 = 5 iff U(2) = 5, for either L-part
    }


def verify_mono_projection(
    limits: CyclicLimit,
    cd: CliqueData,
    *,
    replications: int,
    k: int = 0,
    window: int = 3,
    seed: int,
    alpha: float = 0.001,
) -> VerificationReport:
    """Check the mono-particle projection identities on the built-in law.

    On every replication the five event equivalences are checked exactly at
    time k; the empirical law of the first coordinate is tested against its
    exact invariant marginal.
    """
    if limits.law != example_law():
        raise InputError("mono-particle projection identities are specific to the built-in law")
    if replications < 1000:
        raise InputError("mono-projection verification needs at least 1000 replications")
    events = mono_projection_events(limits)
    Lambda_W = RationalMeasure.point(cd.W[0])
    lam = coordinate_marginal(invariant_law(limits, cd, Lambda_W), 1)

    report = VerificationReport(
        replications=replications,
        seed=seed,
        alpha=alpha,
        config={"k": k, "window": window, "mode": "mono-projection"},
    )
    bad = 0
    x1_counts = {}
    for path in _substream_paths(limits, cd, Lambda_W, replications, k, window, seed):
        idx = path.index(k)
        x1 = path.X[idx][0]
        xl = path.X_L[idx]
        u2 = path.X_G[idx](2)
        x1_counts[x1] = x1_counts.get(x1, 0) + 1
        for value, (want_l, want_u2) in events.items():
            holds = (want_l is None or xl == want_l) and u2 == want_u2
            if (x1 == value) != holds:
                bad += 1
    report.add(
        Check("five mono-particle event identities", "exact", bad == 0,
              note=f"{replications} replications")
    )
    expected = {x: lam[x] for x in lam.support()}
    report.add(
        chi_square_gof(
            x1_counts, expected, replications, alpha,
            "empirical X^1_k law matches the invariant marginal",
        )
    )
    return report


def estimate_Te(path: EvolutionPath, k: int, word: list):
    """Largest l < k - n with N_{l+n} * ... * N_{l+1} equal to the unit word's
    value, or None if no such l lies in the path window."""
    if not word:
        raise InputError("witness word must be nonempty")
    n = len(word)
    target = word[0]
    for f in word[1:]:
        target = target * f
    path.index(k)
    top = min(k - n - 1, path.k_max - n)
    for l in range(top, path.k_min - 1, -1):
        prod = path.n_at(l + n)
        for j in range(l + n - 1, l, -1):
            prod = prod * path.n_at(j)
        if prod == target:
            return l
    return None


def mixing_uniformity(
    limits: CyclicLimit,
    f: Transformation,
    h: Transformation,
    *,
    n: int,
    replications: int,
    seed: int,
    alpha: float = 0.001,
) -> Check:
    """Empirical law of the H-part of f N_1 ... N_n h against uniform on H."""
    rd = limits.rd
    if f not in rd.kernel_set or h not in rd.kernel_set:
        raise InputError("mixing check needs kernel elements at both ends")
    counts = {}
    for r in range(replications):
        rng = make_rng(seed ^ r)
        prod = f
        for _ in range(n):
            prod = prod * draw(limits.law.measure, rng)
        prod = prod * h
        g = rd.e * prod * rd.e
        _, h_part = rd.ch_split(g)
        counts[h_part] = counts.get(h_part, 0) + 1
    uniform_h = {x: Fraction(1, len(rd.H)) for x in rd.H}
    return chi_square_gof(
        counts, uniform_h, replications, alpha,
        f"H-part of f N_1..N_{n} h uniform on H",
    )
