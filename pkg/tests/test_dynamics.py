import random

import numpy as np
import pytest

from conftest import random_graph, random_state
from dense import cz_matrix, expectation, insert_identity, local_matrix, matrix, project, stabilized_vector
from stabbond import catalog, dynamics
from stabbond.dynamics import ContradictedOutcome, MeasurementError, UnsupportedBasis
from stabbond.pauli import SignedPauli
from stabbond.group import GroupError, column_census, from_generators, is_entangled_qubit


def _gens(s):
    return [str(g) for g in s.generators]


def test_cz_matches_dense(rng):
    for _ in range(40):
        s = random_state(rng, rng.randint(2, 4))
        a, b = rng.sample(range(s.n), 2)
        post = dynamics.apply_cz(s, a, b)
        u = cz_matrix(s.n, a, b)
        for g, h in zip(s.generators, post.generators):
            assert np.allclose(u @ matrix(str(g)) @ u.conj().T, matrix(str(h)))


def test_local_gates_match_dense(rng):
    for _ in range(40):
        s = random_state(rng, rng.randint(1, 3))
        k = rng.randrange(s.n)
        word = "".join(rng.choice("HSXYZ") for _ in range(rng.randint(1, 4)))
        post = dynamics.apply_local_clifford(s, k, word)
        u = local_matrix(s.n, k, word)
        for g, h in zip(s.generators, post.generators):
            assert np.allclose(u @ matrix(str(g)) @ u.conj().T, matrix(str(h)))


def test_unknown_gate():
    with pytest.raises(GroupError):
        dynamics.apply_local_clifford(from_generators(["Z"]), 0, "T")


def test_cz_order_is_irrelevant(rng):
    for _ in range(30):
        n = rng.randint(2, 6)
        s = random_state(rng, n)
        edges = list(random_graph(rng, n).edges)
        a = s
        for e in edges:
            a = dynamics.apply_cz(a, *e)
        rng.shuffle(edges)
        b = s
        for e in edges:
            b = dynamics.apply_cz(b, *reversed(e) if rng.random() < 0.5 else e)
        assert a == b


def test_cz_symmetric(rng):
    for _ in range(20):
        s = random_state(rng, 4)
        assert dynamics.apply_cz(s, 0, 2) == dynamics.apply_cz(s, 2, 0)


def test_cz_same_qubit():
    with pytest.raises(GroupError):
        dynamics.apply_cz(from_generators(["ZZ", "XX"]), 1, 1)


def test_measurement_matches_dense(rng):
    checked = 0
    for _ in range(60):
        s = random_state(rng, rng.randint(2, 4))
        v = stabilized_vector(_gens(s), s.n)
        k = rng.randrange(s.n)
        basis = rng.choice(dynamics.BASES)
        for outcome in (1, -1):
            w = project(v, s.n, k, basis, outcome)
            if w is None:
                with pytest.raises(ContradictedOutcome):
                    dynamics.measure(s, k, basis, outcome)
                continue
            post, rec = dynamics.measure(s, k, basis, outcome)
            assert rec.outcome == outcome
            for g in post.generators:
                big = matrix(insert_identity(str(g), k))
                assert abs(expectation(w, big) - 1) < 1e-9
            checked += 1
    assert checked > 60


def test_forced_outcome_is_reported():
    s = from_generators(["-ZI", "IX"])
    post, rec = dynamics.measure(s, 0, "Z", "sample", random.Random(1))
    assert rec.determined and rec.outcome == -1
    assert [str(g) for g in post.generators] == ["+X"]


def test_bad_requests():
    s = from_generators(["XX", "ZZ"])
    with pytest.raises(UnsupportedBasis):
        dynamics.measure(s, 0, "W", 1)
    with pytest.raises(MeasurementError):
        dynamics.measure(s, 0, "Z", 2)
    with pytest.raises(MeasurementError):
        dynamics.measure(from_generators(["Z"]), 0, "Z", 1)


def test_entangled_measurement_halves_group(rng):
    for _ in range(50):
        s = random_state(rng, rng.randint(2, 6))
        k = rng.randrange(s.n)
        if not is_entangled_qubit(s, k):
            continue
        basis = rng.choice(dynamics.BASES)
        kept, struck = dynamics.truncation_split(s.elements(), k, basis)
        assert len(kept) == len(struck) == s.size // 2
        post, rec = dynamics.measure(s, k, basis, "sample", rng)
        assert post.size == s.size // 2 and not rec.determined


def test_unentangled_census(rng):
    for _ in range(30):
        rest = random_state(rng, rng.randint(1, 4))
        n = rest.n + 1
        # a fresh qubit 0 in |0>, then rotated by a random local word
        gens = [SignedPauli.single(n, 0, "Z")]
        gens += [SignedPauli(n, g.x, g.z, g.phase) for g in rest.generators]
        t = dynamics.apply_local_clifford(from_generators(gens), 0, rng.choice(["H", "HS", "S", "X"]))
        c = column_census(t, 0).as_dict()
        assert not is_entangled_qubit(t, 0)
        assert c["I"] == t.size // 2
        assert sorted(c[x] for x in "XYZ") == [0, 0, t.size // 2]


def test_measure_sequence_uses_labels():
    s = catalog.named_state("ghz", 4)
    post, recs = dynamics.measure_sequence(s, [(1, "Z", 1), (3, "Z", 1)])
    assert post.labels == (2, 4)
    assert [r.qubit for r in recs] == [1, 3]


def test_sampling_is_seeded():
    s = catalog.named_state("pentagon")
    steps = [(1, "X", "sample"), (2, "Y", "sample"), (4, "Z", "sample")]
    a, ra = dynamics.measure_sequence(s, steps, seed=5)
    b, rb = dynamics.measure_sequence(s, steps, seed=5)
    assert a == b and ra == rb
