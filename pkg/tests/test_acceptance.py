"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Criterion 4 is implemented exactly as stated and is expected to fail: the
literal running average (1/n) sum mu^k converges to nu at rate Theta(1/n),
so its sup error at n = 10^4 sits near 5e-5, far above the stated 1e-9.
The sound rate statement is asserted in test_limits instead.
"""

import time
from fractions import Fraction

import pytest

from finevo import analyze_law, example_law
from finevo.cliques import InvariantFamily, classify_family, invariant_law
from finevo.limits import (
    cesaro_average,
    exact_vs_float_sup,
    float_limit_oracle,
)
from finevo.measure import (
    RationalMeasure,
    act_on_tuples,
    convolve,
    coordinate_marginal,
    measure_product,
)
from finevo.semigroup import coset_structure, project
from finevo.simulate import (
    sample_nonstationary,
    sample_stationary,
    verify_factorization,
    verify_mono_projection,
    verify_nonstationary_joint,
    verify_path_exact,
    verify_third_noise,
)
from finevo.transform import Transformation
from fuzzlaws import cyclic3_law, p3_h2_law

SEED = 42
R = 10_000
ALPHA = 0.001


def report_line(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {name}: {status}{' | ' + detail if detail else ''}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_golden_example_exact():
    start = time.monotonic()
    a = analyze_law(example_law())
    problems = []

    e = Transformation([4, 2, 2, 4, 5])
    fe = Transformation([1, 3, 3, 1, 5])
    ef = Transformation([2, 2, 4, 4, 5])
    h = Transformation([2, 4, 4, 2, 5])
    g = Transformation([2, 5, 5, 2, 4])

    def check(label, ok):
        if not ok:
            problems.append(label)

    check("e", a.rd.e == e)
    check("h in G", h in set(a.rd.G))
    check("fe", fe in set(a.rd.L))
    check("ef", ef in set(a.rd.R))
    check("L", set(a.rd.L) == {e, fe})
    check("|G|", len(a.rd.G) == 6)
    check("g^3 = e", g ** 3 == e)
    check("h^2 = e", h * h == e)
    check("R", set(a.rd.R) == {e, ef})
    check("eta_L", a.limits.eta_L == RationalMeasure({e: "2/3", fe: "1/3"}))
    check("eta_R", a.limits.eta_R == RationalMeasure({e: "2/3", ef: "1/3"}))
    check("H = G", set(a.rd.H) == set(a.rd.G))
    check("p", a.limits.p == 1)
    check("m_mu", a.m_mu == 3)
    check("|W_mu|", len(a.cliques.W_mu) == 12)
    check("W", a.cliques.W == ((2, 4, 5),))
    check(
        "projection of (3,5,1)",
        a.cliques.project_index((3, 5, 1))
        == (fe, Transformation([5, 2, 2, 5, 4]), (2, 4, 5)),
    )
    lam = coordinate_marginal(
        invariant_law(a.limits, a.cliques, RationalMeasure.point((2, 4, 5))), 1
    )
    check(
        "marginal lambda",
        lam == RationalMeasure({1: "1/9", 2: "2/9", 3: "1/9", 4: "2/9", 5: "3/9"}),
    )

    elapsed = time.monotonic() - start
    check("runtime < 1 s", elapsed < 1.0)
    report_line(
        "criterion 1 (golden example, exact)",
        not problems,
        f"{elapsed:.2f}s" + (f"; failed: {problems}" if problems else ""),
    )


def _structural_suite(a) -> list:
    problems = []
    S, K, rd, lim, cd = a.semigroup, a.kernel, a.rd, a.limits, a.cliques
    kset = set(K)
    mu = a.law.measure

    if not all(s * z in kset and z * s in kset for s in S for z in K):
        problems.append("kernel not an ideal")
    for l in rd.L:
        for g in rd.G:
            for r in rd.R:
                z = l * g * r
                if project(rd, z) != (l, g, r):
                    problems.append("Rees bijection round trip")
                if (z * z == z) != (r * l == rd.inv(g)):
                    problems.append("idempotency criterion")
    for z in K:
        l, g, r = project(rd, z)
        if l * g * r != z or l not in set(rd.L) or g not in set(rd.G) or r not in set(rd.R):
            problems.append("projection formula")
    gset = set(rd.G)
    if not all(r * l in gset for r in rd.R for l in rd.L):
        problems.append("RL not inside G")

    if convolve(lim.eta, lim.eta) != lim.eta:
        problems.append("eta^2 != eta")
    acc = lim.eta
    for _ in range(lim.p):
        acc = convolve(mu, acc)
    if acc != lim.eta:
        problems.append("mu^p eta != eta")
    if convolve(lim.nu, lim.nu) != lim.nu:
        problems.append("nu^2 != nu")
    if convolve(mu, lim.nu) != lim.nu or convolve(lim.nu, mu) != lim.nu:
        problems.append("mu nu != nu or nu mu != nu")
    if set(lim.nu.support()) != kset:
        problems.append("supp(nu) != kernel")
    lhr = {l * h * r for l in rd.L for h in rd.H for r in rd.R}
    if set(lim.eta.support()) != lhr:
        problems.append("supp(eta) != LHR")

    hset = set(rd.H)
    if not all(rd.inv(g) * h * g in hset for h in rd.H for g in rd.G):
        problems.append("H not normal")
    if rd.gamma ** rd.p != rd.e:
        problems.append("gamma^p != e")
    cosets = coset_structure(rd)
    covered = [g for coset in cosets for g in coset]
    if sorted(covered) != sorted(rd.G) or len(covered) != len(set(covered)):
        problems.append("cosets do not partition G")
    if rd.p * len(rd.H) != len(rd.G):
        problems.append("p != index of H in G")

    seen = {}
    for l in rd.L:
        for g in rd.G:
            lg = l * g
            for w in cd.W:
                x = lg.apply(w)
                if x in seen:
                    problems.append("LGW not injective")
                seen[x] = True
    if set(seen) != set(cd.W_mu):
        problems.append("LGW != W_mu")

    lam = invariant_law(lim, cd, RationalMeasure.uniform(cd.W))
    if act_on_tuples(mu, lam) != lam:
        problems.append("invariant law not fixed")
    return problems


def test_criterion_2_structural_suite(fuzz_corpus, fuzz_analyses):
    analyses, setup_elapsed = fuzz_analyses
    start = time.monotonic()
    failures = []
    for a in [analyze_law(example_law())] + analyses:
        problems = _structural_suite(a)
        if problems:
            failures.append((a.law, problems))
    elapsed = time.monotonic() - start + setup_elapsed
    ok = not failures and len(analyses) >= 200 and elapsed < 10.0
    report_line(
        "criterion 2 (structural suite on example + fuzz)",
        ok,
        f"{len(analyses)} fuzz laws, {elapsed:.2f}s"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )


def test_criterion_3_oracle_equivalence(fuzz_corpus, fuzz_analyses):
    analyses, _ = fuzz_analyses
    start = time.monotonic()
    cases = [analyze_law(example_law()), analyze_law(cyclic3_law())] + analyses
    worst = 0.0
    failures = []
    for a in cases:
        est = float_limit_oracle(a.law, max_lag=max(16, len(a.rd.G)))
        if not est.converged or est.p_est != a.limits.p:
            failures.append((a.law, est.p_est, a.limits.p))
            continue
        err = max(
            exact_vs_float_sup(a.limits.eta, est.eta_est),
            exact_vs_float_sup(a.limits.nu, est.nu_est),
        )
        worst = max(worst, err)
        if err >= 1e-9:
            failures.append((a.law, err))
    elapsed = time.monotonic() - start
    ok = not failures and elapsed < 30.0
    report_line(
        "criterion 3 (oracle equivalence)",
        ok,
        f"{len(cases)} laws, worst sup error {worst:.2e}, {elapsed:.2f}s"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )


def test_criterion_4_cesaro_convergence():
    a = analyze_law(example_law())
    avg = cesaro_average(a.law, 10_000)
    err = exact_vs_float_sup(a.limits.nu, avg)
    report_line(
        "criterion 4 (Cesaro running average at n=1e4 within 1e-9)",
        err < 1e-9,
        f"measured sup error {err:.3e} (rate is Theta(1/n); see decisions ledger)",
    )


def test_criterion_5_simulation_exact_checks(example_analysis, p3h2_analysis):
    start = time.monotonic()
    failures = []

    a = example_analysis
    lw = RationalMeasure.point(a.cliques.W[0])
    path = sample_stationary(a.limits, a.cliques, lw, -1000, 0, seed=SEED)
    for c in verify_path_exact(path, a.limits, a.cliques):
        if not c.passed:
            failures.append(("example long path", c.name))
    for k in (0, -250, -700):
        c = verify_factorization(path, a.limits, k)
        if not c.passed:
            failures.append(("example factorization", k))

    # five mono-particle event identities, checked at every step
    e = a.rd.e
    fe = next(l for l in a.rd.L if l != e)
    events = {1: (fe, 4), 2: (e, 2), 3: (fe, 2), 4: (e, 4), 5: (None, 5)}
    for i, x in enumerate(path.X):
        u2 = path.X_G[i](2)
        xl = path.X_L[i]
        for value, (want_l, want_u2) in events.items():
            holds = (want_l is None or xl == want_l) and u2 == want_u2
            if (x[0] == value) != holds:
                failures.append(("mono identity", path.k_min + i, value))

    b = p3h2_analysis
    family = InvariantFamily(
        limits=b.limits,
        c=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)),
        Lambda_W=(
            RationalMeasure.point(b.cliques.W[0]),
            RationalMeasure({b.cliques.W[0]: "1/2", b.cliques.W[1]: "1/2"}),
            RationalMeasure.point(b.cliques.W[1]),
        ),
    )
    path_b = sample_nonstationary(b.limits, b.cliques, family, -1000, 0, seed=SEED)
    for c in verify_path_exact(path_b, b.limits, b.cliques):
        if not c.passed:
            failures.append(("p3 long path", c.name))
    for k in (0, -400):
        c = verify_factorization(path_b, b.limits, k)
        if not c.passed:
            failures.append(("p3 factorization", k))

    # every one of R short replication paths satisfies the exact battery
    rep = verify_third_noise(
        a.limits, a.cliques, lw, replications=R, k=0, window=3,
        seed=SEED, alpha=ALPHA, check_exact=True,
    )
    exact = [c for c in rep.checks if c.kind == "exact"]
    for c in exact:
        if not c.passed:
            failures.append(("replication battery", c.name))

    elapsed = time.monotonic() - start
    ok = not failures and elapsed < 60.0
    report_line(
        "criterion 5 (simulation exact checks)",
        ok,
        f"R={R}, 10^3-step paths, {elapsed:.2f}s"
        + (f"; failures: {failures[:5]}" if failures else ""),
    )


def test_criterion_6_statistical_checks(example_analysis, p3h2_analysis):
    start = time.monotonic()
    failing = []

    a = example_analysis
    lw = RationalMeasure.point(a.cliques.W[0])
    rep1 = verify_third_noise(
        a.limits, a.cliques, lw, replications=R, k=0, window=3,
        seed=SEED, alpha=ALPHA,
    )
    rep2 = verify_mono_projection(
        a.limits, a.cliques, replications=R, k=0, seed=SEED, alpha=ALPHA
    )
    # the example law has p = 1; the p = 3 instance makes the phase and
    # remote-past checks nondegenerate at the same alpha/R/seed
    b = p3h2_analysis
    lwb = RationalMeasure({b.cliques.W[0]: "1/2", b.cliques.W[1]: "1/2"})
    rep3 = verify_third_noise(
        b.limits, b.cliques, lwb, replications=R, k=0, window=3,
        seed=SEED, alpha=ALPHA,
    )
    for rep in (rep1, rep2, rep3):
        failing.extend(c.name for c in rep.checks if not c.passed)

    names = {c.name for c in rep1.checks} | {c.name for c in rep3.checks} | {
        c.name for c in rep2.checks
    }
    required = {
        "U^H_k uniform on H",
        "Y_C uniform on C",
        "(Y_C, Z_W) joint = omega_C x Lambda_W",
        "U^H_k independent of (Y_C, Z_W)",
        "U^H_k independent of N-window",
        "empirical X^1_k law matches the invariant marginal",
    }
    missing = required - names

    elapsed = time.monotonic() - start
    ok = not failing and not missing
    report_line(
        "criterion 6 (statistical checks, alpha=0.001, R=1e4, seed 42)",
        ok,
        f"{elapsed:.2f}s"
        + (f"; failing: {failing}" if failing else "")
        + (f"; missing: {missing}" if missing else ""),
    )


def test_criterion_7_nonstationary_reduction(p3h2_analysis):
    start = time.monotonic()
    b = p3h2_analysis
    w0, w1 = b.cliques.W[0], b.cliques.W[1]
    family = InvariantFamily(
        limits=b.limits,
        c=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)),
        Lambda_W=(
            RationalMeasure.point(w0),
            RationalMeasure({w0: "1/2", w1: "1/2"}),
            RationalMeasure.point(w1),
        ),
    )
    rep = verify_nonstationary_joint(
        b.limits, b.cliques, family, replications=R, k_min=-10,
        seed=SEED, alpha=ALPHA,
    )
    joint_ok = rep.all_passed

    back = classify_family(b.limits, b.cliques, family.law_at(0))
    round_trip_ok = back.c == family.c and back.Lambda_W == family.Lambda_W

    elapsed = time.monotonic() - start
    ok = joint_ok and round_trip_ok
    report_line(
        "criterion 7 (non-stationary reduction, p=3)",
        ok,
        f"{elapsed:.2f}s"
        + ("" if joint_ok else "; joint frequencies rejected")
        + ("" if round_trip_ok else "; classification round trip failed"),
    )
