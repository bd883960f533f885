"""Brute-force verification of the kernel / solve / quotient machinery."""

import random
from fractions import Fraction

import pytest

from qtensor.coeff import HomCoeff, hom_group
from qtensor.functions import LinearFnData, hom_data
from qtensor.groups import GroupProduct, R, T, Z, Zk, parse_product
from qtensor.solve import (
    UnsupportedKernel,
    integer_kernel,
    kernel_of_hom,
    quotient_by_subgroup,
    smith_normal_form,
    solve_hom,
    solve_integer,
)


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def test_snf_random():
    rng = random.Random(1)
    for _ in range(60):
        n, m = rng.randrange(1, 5), rng.randrange(1, 5)
        A = [[rng.randrange(-6, 7) for _ in range(m)] for _ in range(n)]
        U, S, V = smith_normal_form(A)
        assert matmul(matmul(U, A), V) == S
        for i in range(n):
            for j in range(m):
                if i != j:
                    assert S[i][j] == 0
        diag = [S[t][t] for t in range(min(n, m))]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
        assert all(d >= 0 for d in diag)


def test_integer_kernel_and_solve():
    rng = random.Random(2)
    for _ in range(40):
        n, m = rng.randrange(1, 4), rng.randrange(1, 5)
        A = [[rng.randrange(-4, 5) for _ in range(m)] for _ in range(n)]
        for v in integer_kernel(A):
            assert all(sum(A[i][j] * v[j] for j in range(m)) == 0 for i in range(n))
        x = [rng.randrange(-3, 4) for _ in range(m)]
        b = [sum(A[i][j] * x[j] for j in range(m)) for i in range(n)]
        sol = solve_integer(A, b)
        assert sol is not None
        assert all(sum(A[i][j] * sol[j] for j in range(m)) == b[i] for i in range(n))


def random_hom(H, E, rng):
    cells = []
    for i in range(len(E)):
        row = []
        for j in range(len(H)):
            grp = hom_group(H[j], E[i])
            if grp.kind == "Zk":
                row.append(HomCoeff(H[j], E[i], rng.randrange(grp.k)))
            elif grp.kind == "Z":
                row.append(HomCoeff(H[j], E[i], rng.randrange(-2, 3)))
            elif grp.kind == "T":
                row.append(HomCoeff(H[j], E[i], Fraction(rng.randrange(4), 4)))
            else:
                row.append(HomCoeff(H[j], E[i], Fraction(rng.randrange(-2, 3))))
        cells.append(row)
    return hom_data(H, E, cells)


FINITE_SIGS = ["Z2,Z2", "Z4,Z2", "Z6", "Z3,Z3", "Z8,Z2", "Z2,Z3,Z4", "Z12,Z2"]


def test_kernel_finite_exhaustive():
    rng = random.Random(3)
    for sigE in FINITE_SIGS:
        for sigG in ["Z2", "Z4", "Z2,Z2", "Z6", "Z3"]:
            E, G = parse_product(sigE), parse_product(sigG)
            for _ in range(4):
                eps = random_hom(E, G, rng)
                pres = kernel_of_hom(eps)
                K, incl = pres.group, pres.inclusion
                # every kernel-group element maps into the true kernel
                imgs = set()
                for r in K.enumerate():
                    e = incl(r)
                    assert G.is_identity(eps(e)), (sigE, sigG, r, e)
                    imgs.add(e)
                true_kernel = {e for e in E.enumerate() if G.is_identity(eps(e))}
                assert imgs == true_kernel, (sigE, sigG)
                assert K.order == len(true_kernel)


def test_kernel_with_z_source():
    # Z x Z2 -> Z4, map (a, b) -> a mod 4: kernel = 4Z x Z2
    E = parse_product("Z,Z2")
    G = parse_product("Z4")
    eps = hom_data(E, G, [[HomCoeff(Z, Zk(4), 1), HomCoeff(Zk(2), Zk(4), 0)]])
    pres = kernel_of_hom(eps)
    K = pres.group
    assert sorted(str(f) for f in K) == ["Z", "Z2"]
    for vals in [(1, 0), (0, 1), (2, 1)]:
        e = pres.inclusion(K.element(vals))
        assert G.is_identity(eps(e))
        assert int(e[0]) % 4 == 0


def test_kernel_circle_sources():
    # T^2 -> T, (x, y) -> 2x + y: kernel isomorphic to T
    E = parse_product("T,T")
    G = parse_product("T")
    eps = hom_data(E, G, [[HomCoeff(T, T, 2), HomCoeff(T, T, 1)]])
    pres = kernel_of_hom(eps)
    assert [f.kind for f in pres.group] == ["T"]
    for v in [Fraction(1, 3), Fraction(1, 7), 0.3]:
        e = pres.inclusion(pres.group.element([v]))
        assert G.is_identity(eps(e))
    # T -> T multiplication by 3: kernel Z3
    eps = hom_data(parse_product("T"), G, [[HomCoeff(T, T, 3)]])
    pres = kernel_of_hom(eps)
    assert [str(f) for f in pres.group] == ["Z3"]
    for r in pres.group.enumerate():
        assert G.is_identity(eps(pres.inclusion(r)))


def test_kernel_real_into_circle_is_lattice():
    # R -> T, x -> c x mod 1: kernel (1/c) Z
    E, G = parse_product("R"), parse_product("T")
    eps = hom_data(E, G, [[HomCoeff(R, T, Fraction(3))]])
    pres = kernel_of_hom(eps)
    assert [f.kind for f in pres.group] == ["Z"]
    e = pres.inclusion(pres.group.element([5]))
    assert G.is_identity(eps(e))
    assert e[0] == Fraction(5, 3)


def test_kernel_real_block():
    E, G = parse_product("R,R,R"), parse_product("R")
    eps = hom_data(E, G, [[HomCoeff(R, R, Fraction(1)), HomCoeff(R, R, Fraction(-1)),
                           HomCoeff(R, R, Fraction(0))]])
    pres = kernel_of_hom(eps)
    assert [f.kind for f in pres.group] == ["R", "R"]
    for vals in [(Fraction(1), Fraction(2)), (Fraction(-3), Fraction(1, 2))]:
        e = pres.inclusion(pres.group.element(vals))
        assert G.is_identity(eps(e))


def test_kernel_mixed_block_diagonal():
    # block-diagonal finite + real: kernels splice
    E = parse_product("Z2,R")
    G = parse_product("Z2,R")
    eps = hom_data(E, G, [
        [HomCoeff(Zk(2), Zk(2), 1), HomCoeff(R, Zk(2), 0)],
        [HomCoeff(Zk(2), R, 0), HomCoeff(R, R, Fraction(0))],
    ])
    pres = kernel_of_hom(eps)
    assert [f.kind for f in pres.group] == ["R"]


def test_kernel_mixed_row_raises():
    E = parse_product("Z,R")
    G = parse_product("R")
    eps = hom_data(E, G, [[HomCoeff(Z, R, Fraction(1)), HomCoeff(R, R, Fraction(1))]])
    with pytest.raises(UnsupportedKernel):
        kernel_of_hom(eps)


def test_solve_finite():
    rng = random.Random(5)
    for sigE in FINITE_SIGS:
        for sigG in ["Z2", "Z4", "Z2,Z2", "Z6"]:
            E, G = parse_product(sigE), parse_product(sigG)
            eps = random_hom(E, G, rng)
            elems = list(E.enumerate())
            image = {eps(e) for e in elems}
            for g in G.enumerate():
                sol = solve_hom(eps, g)
                if g in image:
                    assert sol is not None and G.eq(eps(E.element(sol)), g)
                else:
                    assert sol is None


def test_solve_real():
    E, G = parse_product("R,R"), parse_product("R")
    eps = hom_data(E, G, [[HomCoeff(R, R, Fraction(2)), HomCoeff(R, R, Fraction(1))]])
    sol = solve_hom(eps, (Fraction(5),))
    assert sol is not None and G.eq(eps(sol), (Fraction(5),))


def test_solve_circle():
    E, G = parse_product("T"), parse_product("T")
    eps = hom_data(E, G, [[HomCoeff(T, T, 2)]])
    sol = solve_hom(eps, (Fraction(1, 3),))
    assert sol is not None and G.eq(eps(sol), (Fraction(1, 3),))


def test_quotient_finite():
    rng = random.Random(7)
    for sigS in ["Z4,Z2", "Z2,Z2,Z2", "Z8", "Z6,Z2"]:
        S = parse_product(sigS)
        for sigK in ["Z2", "Z2,Z2"]:
            K = parse_product(sigK)
            incl = random_hom(K, S, rng)
            # make an honest subgroup: image of incl
            img = {incl(r) for r in K.enumerate()}
            pres = quotient_by_subgroup(S, incl)
            Q = pres.group
            assert Q.order * len(img) == S.order
            # projection is a homomorphism with kernel = img
            for s in S.enumerate():
                for t in list(S.enumerate())[:6]:
                    lhs = pres.project(S.add(s, t))
                    rhs = Q.add(pres.project(s), pres.project(t))
                    assert Q.eq(lhs, rhs)
            kernel_of_proj = {s for s in S.enumerate() if Q.is_identity(pres.project(s))}
            assert kernel_of_proj == img
            # lifts are sections: project(lift(q)) == q
            for qi, lif in enumerate(pres.lift):
                image_q = pres.project(S.element(lif))
                expected = Q.identity()
                expected = list(expected)
                expected[qi] = Q[qi].normalize(1)
                assert Q.eq(image_q, tuple(expected))
