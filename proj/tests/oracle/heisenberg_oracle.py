#!/usr/bin/env python3
"""Symbolic oracle for the Heisenberg contact system.

Computes the nonholonomic connection, Schouten tensor and the final
(level-1) curvature with exact sympy arithmetic, directly from the
coordinate formulas, and prints the nonzero components at a few fixed
points. The printed table is frozen into tools/src/oracle_table.cpp.

Conventions: 0-based indices, Gamma[c][a][b] with a the differentiation
direction, K[d][a][b][c] antisymmetric in (a, b). Bivector sums in the
metric extension and mu run over all ordered index pairs.
"""
from itertools import product

import sympy as sp

x, y, z = sp.symbols("x y z")
coords = [x, y, z]
n, m = 3, 2
half = sp.Rational(1, 2)
frame = sp.Matrix([[1, 0, -y * half], [0, 1, x * half], [y * half, -x * half, 1]])
G = sp.eye(3)


def d(a, f):
    return sp.expand(sum(frame[a, i] * sp.diff(f, coords[i]) for i in range(n)))


expand_in_frame = sp.simplify(frame.T.inv())
C = {}
for a, b in product(range(n), repeat=2):
    br = sp.Matrix([d(a, frame[b, i]) - d(b, frame[a, i]) for i in range(n)])
    C[a, b] = sp.simplify(expand_in_frame * br)

g = sp.simplify(frame[:m, :] * G * frame[:m, :].T)
gi = sp.simplify(g.inv())


def omega(c, a, b):
    return -C[a, b][c] / 2


gamma = {}
for a, b, c in product(range(m), repeat=3):
    braces = sum(gi[c, e] * (d(a, g[b, e]) + d(b, g[a, e]) - d(e, g[a, b])) for e in range(m)) / 2
    corr = sum(g[a, e] * gi[c, f] * omega(e, b, f) + g[b, e] * gi[c, f] * omega(e, a, f)
               for e in range(m) for f in range(m))
    gamma[c, a, b] = sp.simplify(braces + corr - omega(c, a, b))


def curvature(pi, ni):
    k = {}
    for a, b, c, dd in product(range(ni), range(ni), range(m), range(m)):
        t = d(a, pi[dd, b, c]) - d(b, pi[dd, a, c])
        t += sum(pi[dd, a, e] * pi[e, b, c] - pi[dd, b, e] * pi[e, a, c] for e in range(m))
        t += sum(-C[a, b][cc] * pi[dd, cc, c] for cc in range(ni))
        t -= sum(C[a, b][p] * C[p, c][dd] for p in range(ni, n))
        k[dd, a, b, c] = sp.simplify(t)
    return k


schouten = curvature(gamma, m)

# Level 1: metric on the complement block {2}.
gup = sum(C[a, b][2] * C[c, f][2] * gi[a, c] * gi[b, f] for a, b, c, f in product(range(m), repeat=4))
glow = sp.simplify(1 / gup)
mstar = {(a, b): sp.simplify(sum(C[c, f][2] * glow * gi[c, a] * gi[f, b] for c, f in product(range(m), repeat=2)))
         for a, b in product(range(m), repeat=2)}
pi1 = {}
for a, b, c in product(range(n), range(m), range(m)):
    if a < m:
        pi1[c, a, b] = gamma[c, a, b]
    else:
        pi1[c, a, b] = sp.simplify(sum(mstar[p, q] * schouten[c, p, q, b] for p, q in product(range(m), repeat=2))
                                   + C[a, b][c])
wagner = curvature(pi1, n)

points = [(sp.Rational(3, 10), sp.Rational(-7, 10), sp.Rational(1, 5)),
          (sp.Rational(-6, 5), sp.Rational(1, 2), sp.Rational(2, 1)),
          (sp.Rational(0), sp.Rational(0), sp.Rational(0))]

print("# symbolic")
print("gup =", gup)
for key, v in gamma.items():
    if v != 0:
        print("Gamma", key, v)
for key, v in schouten.items():
    if v != 0:
        print("Schouten", key, v)
for key, v in wagner.items():
    if v != 0:
        print("Wagner", key, v)
for pt in points:
    sub = dict(zip(coords, pt))
    print("# point", [float(p) for p in pt])
    for name, table in (("gamma", gamma), ("schouten", schouten), ("wagner", wagner)):
        for key, v in table.items():
            val = sp.nsimplify(v.subs(sub))
            if val != 0:
                print(f"{name} {' '.join(map(str, key))} {sp.N(val, 17)}")
