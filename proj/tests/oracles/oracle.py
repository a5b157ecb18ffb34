# Independent reference values for the C++ tests (brute force, mpmath/numpy).
import cmath, math
from fractions import Fraction
import numpy as np
from mpmath import mp, mpf, quad, exp, inf, sqrt, pi

mp.dps = 30
TH = math.sqrt(2) - 1
GOLD = (math.sqrt(5) - 1) / 2

def conv(a, b, th):
    out = {}
    for (m1, n1), x in a.items():
        for (m2, n2), y in b.items():
            k = (m1 + m2, n1 + n2)
            out[k] = out.get(k, 0) + cmath.exp(-2j * math.pi * th * n1 * m2) * x * y
    return out

print("mul(U1+U2,U1-U2)(1,1) =", conv({(1, 0): 1, (0, 1): 1}, {(1, 0): 1, (0, 1): -1}, TH)[(1, 1)])
print("mul(U2,U1)(1,1) =", conv({(0, 1): 1}, {(1, 0): 1}, TH)[(1, 1)])

def star(a, th):
    return {(-m, -n): cmath.exp(-2j * math.pi * th * m * n) * complex(v).conjugate() for (m, n), v in a.items()}
print("star(U1U2) =", star({(1, 1): 1}, TH))

def egcd(a, b):
    if b == 0:
        return (a, 1, 0)
    g, x, y = egcd(b, a % b)
    return (g, y, x - (a // b) * y)

def sl2(c, d):
    if c == 0:
        return (d, 0)
    C = abs(c)
    for a in range(C):
        if (a * d - 1) % c == 0:
            return (a, (a * d - 1) // c)
print("sl2(1,1)", sl2(1, 1), "sl2(3,2)", sl2(3, 2), "sl2(-3,2)", sl2(-3, 2))
a, b = sl2(1, 1)
print("theta'(1,1) =", (a * TH + b) / (TH + 1))
print("curvature (1,1) tau=-i:", -4 * math.pi * (1 / (TH + 1)) * (-1))
print("q bound (1,1):", 1 / (2 * math.sqrt(math.pi * (1 / (TH + 1)))))

# b(Gaussian, Gaussian) for (c,d)=(1,1): f2 = exp(-lam x^2/2) on E, f1 = sigma(f2)
mu = 1 / (TH + 1); r = TH + 1; lam = 2 * math.pi * mu
f2 = lambda x: mp.e ** (-lam * x * x / 2)
f1 = lambda x: mp.e ** (-lam * (r * x) ** 2 / 2)
print("b(sigma(g),g) =", quad(lambda x: f1(x / r) * f2(x), [-inf, inf]), " ||g||^2 =", mp.sqrt(mp.pi / lam))

# ample sequence: literal rule and the monotone filter
def ample(th, floor, count):
    out = []
    n = 1
    while len(out) < count:
        d = math.ceil(n * th + floor)
        while math.gcd(n, d) != 1:
            d += 1
        c = -n
        if not out or (out[-1][1] * c - d * out[-1][0]) > 0 and False:
            pass
        if not out or c / (c * th + d) < out[-1][0] / (out[-1][0] * th + out[-1][1]):
            out.append((c, d))
        n += 1
    return out
seq = ample(TH, 1, 12)
print("ample sqrt2-1 floor1:", seq)
print("ample golden floor1:", ample(GOLD, 1, 8))
print("ample pi-3 floor2:", ample(math.pi - 3, 2, 8))

def twist(ei, ei0, th):
    chi = ei[1] * ei0[0] - ei0[1] * ei[0]
    F = (chi * ei0[0] - ei[0], chi * ei0[1] - ei[1])
    rk = F[0] * th + F[1]
    return chi, F, rk
print("twist((-3,5),(-1,2)) =", twist((-3, 5), (-1, 2), TH))
seq50 = ample(TH, 1, 50)
for j0, e0 in enumerate(seq50):
    found = None
    for j in range(j0 + 1, 50):
        chi, F, rk = twist(seq50[j], e0, TH)
        if chi > 0 and rk > 0:
            found = (j0, j, seq50[j], e0, F, F[0] / rk)
            break
    if found:
        print("first passing twist:", found)
        break

# displaced Gaussian matrix element
lam = 2.3; k = 0.7; dl = 0.4
psi0 = lambda y: (lam / mp.pi) ** 0.25 * mp.e ** (-lam * y * y / 2)
num = quad(lambda y: psi0(y) * mp.expj(k * y) * psi0(y - dl), [-inf, inf])
ana = cmath.exp(-lam * dl * dl / 4 - k * k / (4 * lam)) * cmath.exp(1j * k * dl / 2)
print("displaced <psi0|..>:", complex(num), ana)
