"""Shared Clifford automorphism data used by several test modules."""

from qtensor.coeff import Hom2Coeff, HomCoeff, QuadCoeff
from qtensor.functions import QuadraticFnData
from qtensor.groups import T, Zk, parse_product
from qtensor.stab import CliffordData, dual_product


def hadamard_data() -> CliffordData:
    H = parse_product("Z2")
    P = H * dual_product(H)
    alpha = [[HomCoeff(P[0], P[0], 0), HomCoeff(P[1], P[0], 1)],
             [HomCoeff(P[0], P[1], 1), HomCoeff(P[1], P[1], 0)]]
    u = QuadraticFnData.zero(P)
    u.set_cell("phi", 0, 1, Hom2Coeff(P[0], P[1], T, 1))
    return CliffordData(H, alpha, u)


def s_gate_data() -> CliffordData:
    H = parse_product("Z2")
    P = H * dual_product(H)
    alpha = [[HomCoeff(P[0], P[0], 1), HomCoeff(P[1], P[0], 0)],
             [HomCoeff(P[0], P[1], 1), HomCoeff(P[1], P[1], 1)]]
    u = QuadraticFnData.zero(P)
    u.phi1[0] = QuadCoeff(Zk(2), T, 1, 0)
    return CliffordData(H, alpha, u)


def cx_data() -> CliffordData:
    H = parse_product("Z2,Z2")
    P = H * dual_product(H)
    rows = [
        [1, 0, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
    ]
    alpha = [[HomCoeff(P[j], P[i], rows[i][j]) for j in range(4)] for i in range(4)]
    return CliffordData(H, alpha, QuadraticFnData.zero(P))


def cz_data() -> CliffordData:
    H = parse_product("Z2,Z2")
    P = H * dual_product(H)
    rows = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ]
    alpha = [[HomCoeff(P[j], P[i], rows[i][j]) for j in range(4)] for i in range(4)]
    u = QuadraticFnData.zero(P)
    u.set_cell("phi", 0, 1, Hom2Coeff(P[0], P[1], T, 1))
    return CliffordData(H, alpha, u)
