"""Exhaustive coefficient-table verification.

Checks every entry of the homomorphism, bilinear, quadratic, composition,
dual, pullback, diagonal-restriction, inclusion, and addition-cocycle
tables against brute-force pointwise evaluation for all finite parameters
up to a bound, plus exact rational sample points on the continuous
groups.  Used by the ``tables selftest`` CLI command and the acceptance
suite.
"""

from __future__ import annotations

import time
from fractions import Fraction
from itertools import product
from typing import Callable

from .coeff import (
    Hom2Coeff,
    HomCoeff,
    QuadCoeff,
    compose,
    dual,
    hom2_apply,
    hom2_group,
    hom_apply,
    hom_group,
    lam,
    linear_as_quad,
    omega_cocycle,
    phi,
    quad_add,
    quad_apply,
    quad_group,
    quad_to_bilinear,
    hom2s_group,
    hom2s_apply,
    standard_quad_value,
)
from .groups import ElementaryGroup, R, T, Z, Zk


def _elems(G: ElementaryGroup):
    if G.kind == "Zk":
        return [Fraction(v) for v in range(G.k)]
    if G.kind == "Z":
        return [Fraction(v) for v in range(-2, 3)]
    if G.kind == "T":
        return [Fraction(0), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]
    return [Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(5, 3)]


def _coeffs(grp: ElementaryGroup, cap: int = 100):
    if grp.kind == "Zk":
        return [Fraction(v) for v in range(min(grp.k, cap))]
    if grp.kind == "Z":
        return [Fraction(v) for v in range(-2, 3)]
    if grp.kind == "T":
        return [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)]
    return [Fraction(0), Fraction(1), Fraction(-2, 3)]


def run_selftest(max_k: int = 8, log: Callable[[str], None] = lambda s: None) -> bool:
    t0 = time.time()
    finite = [Zk(k) for k in range(1, max_k + 1)]
    groups = finite + [Z, T, R]
    ok = True

    def check(cond, msg):
        nonlocal ok
        if not cond:
            ok = False
            log(f"FAIL {msg}")

    # hom: additivity and exhaustive injectivity
    for G in groups:
        for A in groups:
            for c in _coeffs(hom_group(G, A)):
                h = HomCoeff(G, A, c)
                for g, gp in product(_elems(G), repeat=2):
                    lhs = hom_apply(h, G.add(g, gp))
                    rhs = A.normalize(hom_apply(h, g) + hom_apply(h, gp))
                    check(A.eq(lhs, rhs), f"hom additivity {G}->{A} c={c}")
    for G in finite:
        for A in finite + [T]:
            seen = {}
            for c in _coeffs(hom_group(G, A)):
                tab = tuple(hom_apply(HomCoeff(G, A, c), g) for g in range(G.k))
                check(tab not in seen, f"hom iso not injective {G}->{A}")
                seen[tab] = c
    log(f"hom tables ok ({time.time() - t0:.1f}s)")

    # hom2 bilinearity
    for G0 in groups:
        for G1 in groups:
            for A in [T, R, Zk(4), Zk(6), Z]:
                grp = hom2_group(G0, G1, A)
                for c in _coeffs(grp, cap=12):
                    h = Hom2Coeff(G0, G1, A, c)
                    for g0, g0p, g1 in product(_elems(G0)[:3], _elems(G0)[:3], _elems(G1)[:3]):
                        lhs = hom2_apply(h, G0.add(g0, g0p), g1)
                        rhs = A.normalize(hom2_apply(h, g0, g1) + hom2_apply(h, g0p, g1))
                        check(A.eq(lhs, rhs), f"hom2 left-linearity {G0},{G1}->{A}")
    log(f"hom2 tables ok ({time.time() - t0:.1f}s)")

    # quadratic: third derivative vanishes, bilinear matches, injectivity
    for G in groups:
        for A in [T, R] + finite + [Z]:
            g2grp, g1grp = quad_group(G, A)
            combos = list(product(_coeffs(g2grp, 20), _coeffs(g1grp, 20)))[:60]
            for h2, h1 in combos:
                q = QuadCoeff(G, A, h2, h1)
                b = quad_to_bilinear(q)
                for g, gp in product(_elems(G)[:4], repeat=2):
                    d2 = A.normalize(
                        quad_apply(q, G.add(g, gp)) - quad_apply(q, g) - quad_apply(q, gp)
                    )
                    check(A.eq(hom2_apply(b, g, gp), d2),
                          f"quad second derivative {G}->{A} ({h2},{h1})")
    for G in finite:
        seen = {}
        g2grp, g1grp = quad_group(G, T)
        for h2, h1 in product(range(max(g2grp.k, 1)), range(max(g1grp.k, 1))):
            q = QuadCoeff(G, T, h2, h1)
            tab = tuple(quad_apply(q, g) for g in range(G.k))
            check(tab not in seen, f"quad iso not injective over {G}")
            seen[tab] = (h2, h1)
    log(f"quad tables ok ({time.time() - t0:.1f}s)")

    # inclusion of linear into quadratic
    for G in groups:
        for A in [T, R] + finite + [Z]:
            for c in _coeffs(hom_group(G, A), 16):
                h = HomCoeff(G, A, c)
                q = linear_as_quad(h)
                for g in _elems(G):
                    check(A.eq(quad_apply(q, g), hom_apply(h, g)),
                          f"linear-in-quadratic {G}->{A} c={c}")
    log(f"inclusion table ok ({time.time() - t0:.1f}s)")

    # addition (cocycle-free coordinates) and the omega table itself
    for G in groups:
        for A in [T, R, Zk(4), Zk(6), Zk(3)]:
            g2grp, g1grp = quad_group(G, A)
            combos = list(product(_coeffs(g2grp, 8), _coeffs(g1grp, 8)))[:20]
            for (a2, a1), (b2, b1) in product(combos[:8], repeat=2):
                qa, qb = QuadCoeff(G, A, a2, a1), QuadCoeff(G, A, b2, b1)
                qs = quad_add(qa, qb)
                for g in _elems(G)[:4]:
                    rhs = A.normalize(quad_apply(qa, g) + quad_apply(qb, g))
                    check(A.eq(quad_apply(qs, g), rhs), f"quad_add {G}->{A}")
            sgrp = hom2s_group(G, A)
            for b, bp in product(_coeffs(sgrp, 10), repeat=2):
                om = omega_cocycle(G, A, b, bp)
                h = HomCoeff(G, A, om)
                s = sgrp.normalize(b + bp)
                for g in _elems(G)[:4]:
                    diff = A.normalize(
                        standard_quad_value(G, A, s, g)
                        - standard_quad_value(G, A, b, g)
                        - standard_quad_value(G, A, bp, g)
                    )
                    check(A.eq(diff, hom_apply(h, g)), f"omega cocycle {G}->{A}")
                for g, gp in product(_elems(G)[:3], repeat=2):
                    d2 = A.normalize(
                        standard_quad_value(G, A, b, G.add(g, gp))
                        - standard_quad_value(G, A, b, g)
                        - standard_quad_value(G, A, b, gp)
                    )
                    check(A.eq(d2, hom2s_apply(G, A, b, g, gp)),
                          f"standard function bilinear {G}->{A}")
    log(f"addition/cocycle tables ok ({time.time() - t0:.1f}s)")

    # composition
    for G0 in groups:
        for G1 in groups:
            for G2 in groups:
                for a in _coeffs(hom_group(G0, G1), 8):
                    h = HomCoeff(G0, G1, a)
                    for b in _coeffs(hom_group(G1, G2), 8):
                        hp = HomCoeff(G1, G2, b)
                        comp = compose(h, hp)
                        for g in _elems(G0)[:4]:
                            lhs = hom_apply(comp, g)
                            rhs = G2.normalize(hom_apply(hp, hom_apply(h, g)))
                            check(G2.eq(G2.normalize(lhs), rhs),
                                  f"compose {G0},{G1},{G2} ({a},{b})")
    log(f"composition table ok ({time.time() - t0:.1f}s)")

    # duals
    for H in groups:
        for G in groups:
            for A in [T, Zk(4), Zk(6), Z, R]:
                for gv in _coeffs(hom_group(H, G), 8):
                    gamma = HomCoeff(H, G, gv)
                    d = dual(gamma, A)
                    grp = hom_group(H, A)
                    for c in _coeffs(hom_group(G, A), 8):
                        expect = compose(gamma, HomCoeff(G, A, c))
                        got = hom_apply(d, c)
                        check(grp.eq(grp.normalize(got), expect.value),
                              f"dual {H},{G},{A} gamma={gv}")
    log(f"dual table ok ({time.time() - t0:.1f}s)")

    # phi and lambda
    for G in groups:
        for Hs in groups:
            for A in [T, R]:
                g2grp, g1grp = quad_group(G, A)
                combos = list(product(_coeffs(g2grp, 6), _coeffs(g1grp, 6)))[:10]
                for h2, h1 in combos:
                    q = QuadCoeff(G, A, h2, h1)
                    for gv in _coeffs(hom_group(Hs, G), 6):
                        gamma = HomCoeff(Hs, G, gv)
                        qp = phi(q, gamma)
                        for g in _elems(Hs)[:4]:
                            lhs = quad_apply(qp, g)
                            rhs = A.normalize(quad_apply(q, hom_apply(gamma, g)))
                            check(A.eq(lhs, rhs), f"phi {G},{Hs},{A}")
    for G in groups:
        for A in [T, R] + finite[:6] + [Z]:
            for c in _coeffs(hom2_group(G, G, A), 10):
                h = Hom2Coeff(G, G, A, c)
                q = lam(h)
                for g in _elems(G)[:4]:
                    check(A.eq(quad_apply(q, g), hom2_apply(h, g, g)),
                          f"lambda {G}->{A} c={c}")
    log(f"phi/lambda tables ok ({time.time() - t0:.1f}s)")

    log(f"selftest {'passed' if ok else 'FAILED'} in {time.time() - t0:.1f}s")
    return ok
