"""JSON encodings of the coefficient-level data types.

The exact field layouts are documented in docs/format.md; serialization
is stable-key-ordered so outputs diff cleanly.
"""

from __future__ import annotations

import json
from fractions import Fraction
import numpy as np

from .coeff import Hom2Coeff, HomCoeff, QuadCoeff
from .engine import QTensorData
from .fermion import FermionTensorData
from .functions import LinearFnData, QuadraticFnData
from .groups import parse_product
from .scalar import scalar_from_json, scalar_json
from .stab import CliffordData, StabTableau, dual_factor, dual_product


def _cplx(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def _cplx_from(v) -> complex:
    return complex(v[0], v[1])


def quadratic_to_json(q: QuadraticFnData) -> dict:
    return {
        "domain": q.domain.signature(),
        "a0": scalar_json(q.a0),
        "phi0": scalar_json(q.phi0),
        "a1": [[scalar_json(c.h2), scalar_json(c.h1)] for c in q.a1],
        "phi1": [[scalar_json(c.h2), scalar_json(c.h1)] for c in q.phi1],
        "a2": {f"{i},{j}": scalar_json(c.value) for (i, j), c in sorted(q.a2.items())},
        "phi2": {f"{i},{j}": scalar_json(c.value) for (i, j), c in sorted(q.phi2.items())},
    }


def quadratic_from_json(obj: dict) -> QuadraticFnData:
    from .groups import R as Rg, T as Tg

    E = parse_product(obj["domain"])
    q = QuadraticFnData(
        E,
        scalar_from_json(obj.get("a0", 0)),
        scalar_from_json(obj.get("phi0", 0)),
        [QuadCoeff(E[i], Rg, scalar_from_json(v[0]), scalar_from_json(v[1]))
         for i, v in enumerate(obj.get("a1", [[0, 0]] * len(E)))],
        [QuadCoeff(E[i], Tg, scalar_from_json(v[0]), scalar_from_json(v[1]))
         for i, v in enumerate(obj.get("phi1", [[0, 0]] * len(E)))],
    )
    for key, v in obj.get("a2", {}).items():
        i, j = map(int, key.split(","))
        q.set_cell("a", i, j, Hom2Coeff(E[i], E[j], Rg, scalar_from_json(v)))
    for key, v in obj.get("phi2", {}).items():
        i, j = map(int, key.split(","))
        q.set_cell("phi", i, j, Hom2Coeff(E[i], E[j], Tg, scalar_from_json(v)))
    return q


def linear_to_json(eps: LinearFnData) -> dict:
    return {
        "domain": eps.domain.signature(),
        "codomain": eps.codomain.signature(),
        "eps0": [scalar_json(x) for x in eps.eps0],
        "eps1": [[scalar_json(c.value) for c in row] for row in eps.eps1],
    }


def linear_from_json(obj: dict) -> LinearFnData:
    E = parse_product(obj["domain"])
    G = parse_product(obj["codomain"])
    eps0 = G.element([scalar_from_json(x) for x in obj["eps0"]])
    cells = [
        [HomCoeff(E[j], G[i], scalar_from_json(v)) for j, v in enumerate(row)]
        for i, row in enumerate(obj["eps1"])
    ]
    return LinearFnData(E, G, eps0, cells)


def qtensor_to_json(t: QTensorData) -> dict:
    out = {
        "type": "qtensor",
        "G": t.G.signature(),
        "zero": t.is_zero,
        "div_weight": t.div_weight,
    }
    if not t.is_zero:
        out["E"] = t.E.signature()
        out["eps"] = linear_to_json(t.eps)
        out["q"] = quadratic_to_json(t.q)
        out["mag2"] = scalar_json(t.mag2) if t.mag2 is not None else None
    return out


def qtensor_from_json(obj: dict) -> QTensorData:
    G = parse_product(obj["G"])
    if obj.get("zero"):
        return QTensorData.zero(G)
    eps = linear_from_json(obj["eps"])
    q = quadratic_from_json(obj["q"])
    mag2 = obj.get("mag2")
    return QTensorData(
        G, eps.domain, eps, q, obj.get("div_weight", 0),
        Fraction(scalar_from_json(mag2)) if mag2 is not None else None,
    )


def fermion_to_json(t: FermionTensorData) -> dict:
    return {
        "type": "fermion",
        "n": t.n,
        "l": t.l,
        "eps1": [[_cplx(v) for v in row] for row in t.eps1],
        "q2": [[_cplx(v) for v in row] for row in t.q2],
        "q0": _cplx(t.q0),
    }


def fermion_from_json(obj: dict) -> FermionTensorData:
    eps = np.array([[_cplx_from(v) for v in row] for row in obj["eps1"]],
                   dtype=complex) if obj["eps1"] else np.zeros((obj["n"], 0))
    q2 = np.array([[_cplx_from(v) for v in row] for row in obj["q2"]],
                  dtype=complex) if obj["q2"] else np.zeros((0, 0))
    m = obj["n"] - 2 * obj["l"]
    return FermionTensorData(obj["n"], obj["l"], eps.reshape(obj["n"], m),
                             q2.reshape(m, m), _cplx_from(obj["q0"]))


def tableau_to_json(tab: StabTableau) -> dict:
    return {
        "type": "tableau",
        "H": tab.H.signature(),
        "S": tab.S.signature(),
        "sigma_x": [[scalar_json(c.value) for c in row] for row in tab.sigma_x],
        "sigma_z": [[scalar_json(c.value) for c in row] for row in tab.sigma_z],
        "p": quadratic_to_json(tab.p),
    }


def tableau_from_json(obj: dict) -> StabTableau:
    H = parse_product(obj["H"])
    S = parse_product(obj["S"])
    sx = [
        [HomCoeff(S[a], H[i], scalar_from_json(v)) for a, v in enumerate(row)]
        for i, row in enumerate(obj["sigma_x"])
    ]
    sz = [
        [HomCoeff(S[a], dual_factor(H[i]), scalar_from_json(v))
         for a, v in enumerate(row)]
        for i, row in enumerate(obj["sigma_z"])
    ]
    p = quadratic_from_json(obj["p"])
    return StabTableau(H, S, sx, sz, p)


def clifford_to_json(c: CliffordData) -> dict:
    return {
        "type": "clifford",
        "H": c.H.signature(),
        "alpha": [[scalar_json(x.value) for x in row] for row in c.alpha],
        "u": quadratic_to_json(c.u),
    }


def clifford_from_json(obj: dict) -> CliffordData:
    H = parse_product(obj["H"])
    P = H * dual_product(H)
    alpha = [
        [HomCoeff(P[j], P[i], scalar_from_json(v)) for j, v in enumerate(row)]
        for i, row in enumerate(obj["alpha"])
    ]
    return CliffordData(H, alpha, quadratic_from_json(obj["u"]))


def to_json(obj) -> dict:
    if isinstance(obj, QTensorData):
        return qtensor_to_json(obj)
    if isinstance(obj, FermionTensorData):
        return fermion_to_json(obj)
    if isinstance(obj, StabTableau):
        return tableau_to_json(obj)
    if isinstance(obj, CliffordData):
        return clifford_to_json(obj)
    raise TypeError(f"no JSON encoding for {type(obj)}")


def from_json(obj: dict):
    kind = obj.get("type")
    if kind == "qtensor":
        return qtensor_from_json(obj)
    if kind == "fermion":
        return fermion_from_json(obj)
    if kind == "tableau":
        return tableau_from_json(obj)
    if kind == "clifford":
        return clifford_from_json(obj)
    raise TypeError(f"unknown payload type {kind!r}")


def dumps(obj) -> str:
    return json.dumps(to_json(obj), sort_keys=True, indent=2)
