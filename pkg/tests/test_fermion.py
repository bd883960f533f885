"""Fermionic tensors: Pfaffian oracle, worked example tables, beam
splitters, and Schur-complement contraction against the dense graded
oracle."""

import cmath
import math
import random

import numpy as np
import pytest

from qtensor.dense import DenseTensor, dense_contract, self_contract_dense, tensor_product_dense
from qtensor.fermion import (
    FermionTensorData,
    NotAntisymmetric,
    SingularBlock,
    beam_splitter,
    fermion_contract,
    fermion_dense,
    fermion_entry,
    fermion_identity,
    fermion_matrix,
    fermion_tensor_product,
    permute_modes,
    pfaffian,
    pfaffian_cofactor,
)


def random_antisym(n, rng):
    A = np.array([[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
                  for _ in range(n)])
    return A - A.T


def test_pfaffian_small_cases():
    a = 2.5 - 1j
    assert abs(pfaffian(np.array([[0, a], [-a, 0]])) - a) < 1e-12
    assert pfaffian(np.zeros((3, 3))) == 0
    rng = random.Random(3)
    M = random_antisym(4, rng)
    want = M[0, 1] * M[2, 3] - M[0, 2] * M[1, 3] + M[0, 3] * M[1, 2]
    assert abs(pfaffian(M) - want) < 1e-12


def test_pfaffian_vs_cofactor_and_det():
    rng = random.Random(5)
    for n in (2, 4, 6, 8):
        for _ in range(5):
            M = random_antisym(n, rng)
            pf = pfaffian(M)
            assert abs(pf - pfaffian_cofactor(M)) < 1e-9
            det = np.linalg.det(M)
            assert abs(pf * pf - det) < 1e-8 * max(1.0, abs(det))


def test_pfaffian_swap_antisymmetry():
    rng = random.Random(7)
    M = random_antisym(6, rng)
    perm = [1, 0, 2, 3, 4, 5]
    Mp = M[np.ix_(perm, perm)]
    assert abs(pfaffian(Mp) + pfaffian(M)) < 1e-10


def test_pfaffian_not_antisymmetric():
    with pytest.raises(NotAntisymmetric):
        pfaffian(np.eye(2))


def test_paper_three_mode_example():
    rng = random.Random(9)
    for _ in range(5):
        a, b, c, g = (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(4))
        t = FermionTensorData(3, 1, np.array([[a], [b], [c]]), np.zeros((1, 1)), g)
        want = {
            (0, 0, 0): 0, (0, 0, 1): 0, (0, 1, 0): 0, (1, 0, 0): 0,
            (0, 1, 1): g * a, (1, 0, 1): g * b, (1, 1, 0): g * c,
            (1, 1, 1): 0,
        }
        for x, v in want.items():
            assert abs(fermion_entry(t, list(x)) - v) < 1e-12, x


def test_paper_four_mode_example():
    rng = random.Random(11)
    for _ in range(5):
        a, b, c, d, e, f, g, h = (
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(8)
        )
        alpha, gamma = (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2))
        eps = np.array([[a, e], [b, f], [c, g], [d, h]])
        q2 = np.array([[0, alpha], [-alpha, 0]])
        t = FermionTensorData(4, 1, eps, q2, gamma)
        # indices decode as (x0, x1, x2, x3) = (outer row, outer col,
        # inner row, inner col) of the displayed block matrix
        assert abs(fermion_entry(t, [1, 1, 1, 1]) - gamma * alpha) < 1e-12
        assert abs(fermion_entry(t, [0, 0, 1, 1]) - gamma * (a * f - e * b)) < 1e-12
        assert abs(fermion_entry(t, [0, 1, 0, 1]) - gamma * (a * g - e * c)) < 1e-12
        assert abs(fermion_entry(t, [0, 1, 1, 0]) - gamma * (a * h - e * d)) < 1e-12
        assert abs(fermion_entry(t, [1, 0, 0, 1]) - gamma * (b * g - f * c)) < 1e-12
        assert abs(fermion_entry(t, [1, 0, 1, 0]) - gamma * (b * h - f * d)) < 1e-12
        assert abs(fermion_entry(t, [1, 1, 0, 0]) - gamma * (c * h - g * d)) < 1e-12
        assert fermion_entry(t, [1, 0, 0, 0]) == 0
        assert fermion_entry(t, [0, 0, 0, 0]) == 0


def test_parity_grading():
    rng = random.Random(13)
    t = FermionTensorData(4, 1, np.array([[1, 0], [0, 1], [1, 1], [0.5, 2]]),
                          np.array([[0, 0.3], [-0.3, 0]]), 1.0)
    for x in np.ndindex(2, 2, 2, 2):
        if sum(x) % 2 == 1 or sum(x) < 2:
            assert fermion_entry(t, list(x)) == 0


def test_identity_matrices():
    for n in (1, 2):
        t = fermion_identity(n)
        U = fermion_matrix(t, n)
        assert np.max(np.abs(U - np.eye(2 ** n))) < 1e-12


def test_beam_splitter_matrix():
    for th in (0.0, 0.3, 1.0, math.pi / 2):
        t = beam_splitter(th)
        U = fermion_matrix(t, 2)
        c, s = math.cos(th), math.sin(th)
        want = np.array(
            [[1, 0, 0, 0], [0, c, 1j * s, 0], [0, 1j * s, c, 0], [0, 0, 0, 1]],
            dtype=complex,
        )
        assert np.max(np.abs(U - want)) < 1e-10, th


def contract_fermion_ops(t1: FermionTensorData, t2: FermionTensorData,
                         modes: int) -> FermionTensorData:
    """Compose two operator tensors (in-block, out-block): t2 after t1."""
    big = fermion_tensor_product(t1, t2)
    m = modes
    # order: (t1.in, t1.out, t2.in, t2.out) -> (t1.in, t2.out | t1.out, t2.in)
    perm = (
        list(range(m))
        + list(range(3 * m, 4 * m))
        + list(range(m, 2 * m))
        + list(range(2 * m, 3 * m))
    )
    big = permute_modes(big, perm)
    return fermion_contract(big, m)


def dense_compose(t1: FermionTensorData, t2: FermionTensorData, modes: int) -> np.ndarray:
    out1 = [False] * modes + [True] * modes
    d1 = fermion_dense(t1, out1)
    d2 = fermion_dense(t2, out1)
    pairs = [(0, modes + j, 1, j) for j in range(modes)]
    open_order = [(0, j) for j in range(modes)] + [(1, modes + j) for j in range(modes)]
    return dense_contract([d1, d2], pairs, open_order)


def test_beam_splitter_composition_angles_add():
    for t1v, t2v in [(0.3, 0.5), (1.0, -0.4), (0.7, 0.7)]:
        t = contract_fermion_ops(beam_splitter(t1v), beam_splitter(t2v), 2)
        want = beam_splitter(t1v + t2v)
        U = fermion_matrix(t, 2)
        W = fermion_matrix(want, 2)
        assert np.max(np.abs(U - W)) < 1e-9, (t1v, t2v)


def test_beam_splitter_inverse_is_identity():
    t = contract_fermion_ops(beam_splitter(0.8), beam_splitter(-0.8), 2)
    U = fermion_matrix(t, 2)
    assert np.max(np.abs(U - np.eye(4))) < 1e-9


def test_contract_identity_law():
    rng = random.Random(17)
    for _ in range(5):
        q2 = random_antisym(2, rng)
        t = FermionTensorData(2, 0, np.eye(2), q2, 1.0)
        got = contract_fermion_ops(t, fermion_identity(1), 1)
        for x in np.ndindex(2, 2):
            assert abs(fermion_entry(got, list(x)) - fermion_entry(t, list(x))) < 1e-9


def test_contract_vs_dense_random():
    rng = random.Random(19)
    done = 0
    while done < 40:
        n_open = rng.choice([0, 2, 4])
        c = rng.choice([1, 2])
        total = n_open + 2 * c
        if total > 8 or total == 0:
            continue
        q2 = random_antisym(total, rng)
        t = FermionTensorData(total, 0, np.eye(total), q2,
                              complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        try:
            res = fermion_contract(t, c)
        except SingularBlock:
            continue
        # dense reference: contract mode n+j (outgoing) with n+c+j (ingoing)
        out_flags = [False] * n_open + [True] * c + [False] * c
        d = fermion_dense(t, out_flags)
        cur = d
        rem = c
        while rem:
            cur = self_contract_dense(cur, n_open + rem - 1, n_open + 2 * rem - 1)
            rem -= 1
        want = cur.arr
        got = fermion_dense(res).arr
        assert np.max(np.abs(got - want)) < 1e-8, (n_open, c)
        done += 1


def test_graded_sign_order_independence():
    rng = random.Random(23)
    for _ in range(10):
        n = 6
        q2 = random_antisym(n, rng)
        t = FermionTensorData(n, 0, np.eye(n), q2, 1.0)
        d = fermion_dense(t, [False, False, True, True, False, False])
        # contract (2,4) then (3,5) vs (3,5) then (2,4)
        a = self_contract_dense(self_contract_dense(d, 2, 4), 2, 3)
        b = self_contract_dense(self_contract_dense(d, 3, 5), 2, 3)
        assert np.max(np.abs(a.arr - b.arr)) < 1e-10
