import pytest

from finevo.errors import InputError, ResourceLimitError
from finevo.measure import MappingLaw
from finevo.semigroup import (
    complete_rees,
    coset_structure,
    generate,
    idempotents,
    kernel,
    project,
    rees_at,
)
from finevo.transform import Transformation
from oracles import brute_force_closure, brute_force_minimal_ideal

F = Transformation([2, 3, 4, 1, 5])
G = Transformation([2, 5, 5, 2, 4])
E = G ** 3
FE = F * E
EF = E * F
H = (F ** 2) * E

# frozen from the brute-force closure oracle on {f, g}; re-derived below
EXAMPLE_CLOSURE_SIZE = 28
EXAMPLE_KERNEL_SIZE = 24


@pytest.fixture(scope="module")
def S():
    return generate([F, G])


@pytest.fixture(scope="module")
def K(S):
    return kernel(S)


@pytest.fixture(scope="module")
def rd(S, K):
    return rees_at(S, K, E)


def test_closure_matches_brute_force_oracle(S):
    oracle = brute_force_closure([F.images, G.images])
    assert len(oracle) == EXAMPLE_CLOSURE_SIZE
    assert {f.images for f in S} == oracle


def test_closure_contains_golden_elements(S):
    for t in (E, H, FE, EF):
        assert t in S


def test_single_identity_generator():
    S = generate([Transformation.identity(4)])
    assert len(S) == 1


def test_element_cap():
    with pytest.raises(ResourceLimitError):
        generate([F, G], cap=10)


def test_canonical_order_starts_with_generators(S):
    assert S.elements[0] == F and S.elements[1] == G


def test_product_table_closed(S):
    size = len(S)
    table = S.product_table
    assert all(0 <= table[i][j] < size for i in range(size) for j in range(size))
    # spot-check against direct composition
    assert S.elements[S.product(0, 1)] == F * G


def test_word_for_reconstructs(S):
    for target in S.elements:
        word = S.word_for(target)
        acc = word[0]
        for t in word[1:]:
            acc = acc * t
        assert acc == target
    assert S.word_for(E) == [G, G, G]


def test_idempotents_golden(S):
    idem = idempotents(S)
    assert E in idem
    assert FE in idem and FE * FE == FE
    assert EF in idem and EF * EF == EF
    assert H * H == E and H not in idem


def test_idempotents_of_a_permutation_group():
    S = generate([Transformation([2, 3, 1])])
    assert idempotents(S) == [Transformation.identity(3)]


def test_kernel_matches_minimal_ideal_oracle(S, K):
    assert len(K) == EXAMPLE_KERNEL_SIZE
    oracle = brute_force_minimal_ideal({f.images for f in S})
    assert {f.images for f in K} == oracle


def test_kernel_of_a_group_is_everything():
    S = generate([Transformation([2, 3, 1])])
    assert set(kernel(S)) == set(S.elements)


def test_kernel_is_an_ideal(S, K):
    kset = set(K)
    for s in S:
        for z in K:
            assert s * z in kset and z * s in kset


def test_rees_golden_sets(rd):
    assert rd.e == E
    assert set(rd.L) == {E, FE}
    assert set(rd.R) == {E, EF}
    assert len(rd.G) == 6
    assert set(rd.G) == {E, G, G ** 2, H, G * H, (G ** 2) * H}


def test_group_relations(rd):
    assert G ** 3 == E and H * H == E
    assert H * G == (G ** 2) * H
    assert H * (G ** 2) == G * H
    assert rd.inv(G) == G ** 2
    assert rd.inv(E) == E


def test_rees_requires_kernel_idempotent(S, K):
    with pytest.raises(InputError):
        rees_at(S, K, F)  # not in the kernel
    with pytest.raises(InputError):
        rees_at(S, K, G)  # in the kernel but not idempotent


def test_project_golden(rd):
    assert project(rd, FE) == (FE, E, E)
    assert project(rd, E) == (E, E, E)
    assert project(rd, G) == (E, G, E)


def test_project_round_trip(rd, K):
    for z in K:
        l, g, r = project(rd, z)
        assert l in set(rd.L) and g in set(rd.G) and r in set(rd.R)
        assert l * g * r == z
    with pytest.raises(InputError):
        project(rd, F)


def test_product_then_project_is_identity(rd):
    for l in rd.L:
        for g in rd.G:
            for r in rd.R:
                assert project(rd, l * g * r) == (l, g, r)


def test_rl_contained_in_g(rd):
    gset = set(rd.G)
    for r in rd.R:
        for l in rd.L:
            assert r * l in gset


def test_idempotency_criterion(rd):
    for l in rd.L:
        for g in rd.G:
            for r in rd.R:
                z = l * g * r
                assert (z * z == z) == (r * l == rd.inv(g))


def test_kernel_idempotents_are_primitive(rd, K):
    idem = [z for z in K if z.is_idempotent()]
    for e1 in idem:
        for z in idem:
            if e1 * z == z and z * e1 == z:
                assert e1 == z


def test_trivial_kernel_decomposition():
    S = generate([Transformation([1, 1])])
    K = kernel(S)
    rd = rees_at(S, K, Transformation([1, 1]))
    assert rd.L == rd.G == rd.R == (Transformation([1, 1]),)


def test_coset_structure_single_coset(rd):
    completed = complete_rees(rd, H=rd.G, gamma=E, p=1)
    cosets = coset_structure(completed)
    assert len(cosets) == 1 and set(cosets[0]) == set(rd.G)
    assert completed.gamma_power(-3) == E
    c, h = completed.ch_split(G)
    assert c == E and h == G


def test_coset_structure_cyclic_group():
    g = Transformation([2, 3, 1])
    S = generate([g])
    K = kernel(S)
    rd = rees_at(S, K, Transformation.identity(3))
    completed = complete_rees(rd, H=[Transformation.identity(3)], gamma=g, p=3)
    cosets = coset_structure(completed)
    assert [len(c) for c in cosets] == [1, 1, 1]
    assert completed.gamma_power(2) == g * g
    assert completed.gamma_power(-1) == g * g