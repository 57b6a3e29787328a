import random

import numpy as np
import pytest

from conftest import DET_MACHINE, fixture_machines
from mtddplus.automata import parse_tm
from mtddplus.errors import LimitError, MismatchError
from mtddplus.generators import Cnf, identity, row_index, scaled_identity, walsh
from mtddplus.oracle import (as_object, brute_force_sat, cofactor_det, configurations,
                             count_accepting_paths, dense_det, dense_mul, dense_pow, densify,
                             is_acyclic, simulate_tm)
from mtddplus.randgen import random_grammar
from mtddplus.semiring import Zmod


def test_densify_examples():
    assert densify(identity(2)).tolist() == np.eye(4, dtype=int).tolist()
    assert densify(row_index(1)).tolist() == [[1, 1], [2, 2]]


def test_densify_cap():
    with pytest.raises(LimitError):
        densify(identity(11))
    assert densify(identity(11), cap=11).shape == (2048, 2048)


def test_densify_entries_are_python_ints():
    d = densify(scaled_identity(1, 2**100))
    assert d[0, 0] == 2**100 and d.dtype == object


def test_det_examples():
    assert dense_det(np.eye(8, dtype=int)) == 1
    assert dense_det(densify(scaled_identity(3, 2))) == 256
    assert abs(dense_det(densify(walsh(3)))) == 2**12
    assert dense_det(as_object([[0, 1], [1, 0]])) == -1
    assert dense_det(as_object([])) == 1


def test_det_mod():
    m = as_object([[2, 1], [1, 3]])
    assert dense_det(m, 4) == 1
    assert dense_det(m, 5) == 0


def test_det_needs_square():
    with pytest.raises(MismatchError):
        dense_det(as_object([[1, 2]]))


def test_det_agrees_with_cofactor():
    rng = random.Random(47)
    for _ in range(200):
        n = rng.randint(1, 5)
        m = as_object([[rng.randint(-3, 3) if rng.random() < 0.7 else 0 for _ in range(n)]
                       for _ in range(n)])
        assert dense_det(m) == cofactor_det(m)


def test_mul_pow():
    rng = random.Random(53)
    a = densify(random_grammar(rng, 3))
    i = np.eye(8, dtype=int).astype(object)
    assert (dense_mul(i, a) == a).all()
    assert (dense_pow(a, 0) == i).all()
    w = densify(walsh(2))
    assert (dense_pow(w, 2) == 4 * np.eye(4, dtype=int)).all()
    assert (dense_pow(a, 3, 7) == (a.dot(a).dot(a)) % 7).all()
    with pytest.raises(MismatchError):
        dense_mul(a, densify(random_grammar(rng, 2)))
    with pytest.raises(ValueError):
        dense_pow(a, -1)


def test_densify_mod_ring():
    rng = random.Random(59)
    g = random_grammar(rng, 3, Zmod(5))
    d = densify(g)
    assert d.min() >= 0 and d.max() < 5


def test_simulate_no_transitions():
    tm = parse_tm("states s ; initial s ; accept s ; blank _ ; tape _ ;\n")
    assert simulate_tm(tm, 2) == set()


def test_deterministic_single_accepting_path():
    tm = parse_tm(DET_MACHINE)
    counts = [count_accepting_paths(tm, ["1"], 1, L) for L in range(6)]
    assert counts == [0, 0, 0, 1, 0, 0]
    assert sum(count_accepting_paths(tm, [], 1, L) for L in range(6)) == 0


def test_count_matches_dense_power():
    for tm in fixture_machines()[:12]:
        confs = list(configurations(tm, 2))
        index = {c: i for i, c in enumerate(confs)}
        adj = np.zeros((len(confs), len(confs)), dtype=object)
        for c, d in simulate_tm(tm, 2):
            adj[index[c], index[d]] += 1
        word = [s for s in tm.input_alphabet[:1]]
        start = index[tm.initial_config(word, 2)]
        goal = index[tm.accepting_config(2)]
        for L in range(5):
            assert count_accepting_paths(tm, word, 2, L) == dense_pow(adj, L)[start, goal]


def test_configuration_count():
    tm = parse_tm(DET_MACHINE)
    assert len(list(configurations(tm, 2))) == 4 * 2**2 * 2


def test_acyclic_check():
    tm = parse_tm(DET_MACHINE)
    assert is_acyclic(tm, 1)
    loop = parse_tm("states a b ; initial a ; accept b ; blank _ ; tape _ ;\na _ -> a _ S\n")
    assert not is_acyclic(loop, 1)


def test_brute_force_sat():
    assert brute_force_sat(Cnf.of(3, [(1, 2, 3)]))
    every = [[s1, 2 * s2, 3 * s3] for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]
    assert not brute_force_sat(Cnf.of(3, every))
    assert brute_force_sat(Cnf(3, ()))
    with pytest.raises(LimitError):
        brute_force_sat(Cnf(21, ()))
