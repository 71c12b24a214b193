"""Independent reference values for the C++ tests.

Shares no code with the library: surface points come from the implicit
definition, support points from direct maximization, volumes from quadrature
and sampling.  Run once; the printed header is committed as
tests/oracle_values.hpp.
"""
import numpy as np
import mpmath as mp
from scipy.optimize import minimize_scalar, minimize

mp.mp.dps = 40


def spow(x, p):
    return mp.sign(x) * abs(x) ** p


def sq3_point(a, b, c, e1, e2, eta, omega):
    ce, se = mp.cos(eta), mp.sin(eta)
    co, so = mp.cos(omega), mp.sin(omega)
    return [a * spow(ce, e1) * spow(co, e2), b * spow(ce, e1) * spow(so, e2), c * spow(se, e1)]


def sq2_point(a, b, e, t):
    return np.array([a * np.sign(np.cos(t)) * abs(np.cos(t)) ** e,
                     b * np.sign(np.sin(t)) * abs(np.sin(t)) ** e])


def support2(a, b, e, M, n):
    """argmax over the transformed superellipse of <n, M x(t)>."""
    f = lambda t: -float(np.dot(n, M @ sq2_point(a, b, e, t)))
    ts = np.linspace(-np.pi, np.pi, 20001)
    vals = [f(t) for t in ts]
    k = int(np.argmin(vals))
    r = minimize_scalar(f, bounds=(ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]),
                        method="bounded", options={"xatol": 1e-15})
    return M @ sq2_point(a, b, e, r.x)


def out(name, vals):
    body = ", ".join(f"{float(v):.17g}" for v in vals)
    print(f"inline constexpr double {name}[] = {{{body}}};", flush=True)


print("#pragma once\n\n// Generated by tests/oracles/generate.py.\n\nnamespace oracle {\n")

# Surface point of (1,1,1,0.8,1.3) at (0.3, -1.1), high precision.
p = sq3_point(1, 1, 1, mp.mpf("0.8"), mp.mpf("1.3"), mp.mpf("0.3"), mp.mpf("-1.1"))
out("kSurface3D", p)

# Volume of (1,1,1) with exponents (0.5, 0.5) by nested quadrature of the
# z-extent over the footprint, using the implicit function only.
e1 = e2 = mp.mpf("0.5")
def zext(x, y):
    psi = abs(x) ** (2 / e2) + abs(y) ** (2 / e2)
    if psi >= 1:
        return mp.mpf(0)
    return 2 * (1 - psi ** (e2 / e1)) ** (e1 / 2)
def inner(x):
    ymax = (1 - abs(x) ** (2 / e2)) ** (e2 / 2)
    return mp.quad(lambda y: zext(x, y), [-ymax, 0, ymax])
mp.mp.dps = 20
vol = mp.quad(inner, [-1, 0, 1])
mp.mp.dps = 40
out("kVolumeHalfHalf", [vol])

# Monte-Carlo estimate of the same volume, 2e6 samples in [-1,1]^3.
rng = np.random.default_rng(20240601)
pts = rng.uniform(-1, 1, size=(2_000_000, 3))
psi = np.abs(pts[:, 0]) ** 4 + np.abs(pts[:, 1]) ** 4
inside = psi ** 1.0 + np.abs(pts[:, 2]) ** 4 <= 1
out("kVolumeHalfHalfMC", [8.0 * inside.mean()])

# Phi for body2 = 2D superellipse (1.5, 0.7, eps 0.6) and m1 = (0.8, -1.3):
# dense search for the body-2 boundary point with gradient anti-parallel to m1.
a2, b2, eps = 1.5, 0.7, 0.6
m1 = np.array([0.8, -1.3])
def grad2(t):
    x = sq2_point(a2, b2, eps, t)
    q = 2 / eps
    return np.array([q / a2 * np.sign(x[0]) * abs(x[0] / a2) ** (q - 1),
                     q / b2 * np.sign(x[1]) * abs(x[1] / b2) ** (q - 1)])
def misalign(t):
    g = grad2(t)
    return 1 + np.dot(g, m1) / (np.linalg.norm(g) * np.linalg.norm(m1))
ts = np.linspace(-np.pi, np.pi, 200001)
k = int(np.argmin([misalign(t) for t in ts]))
r = minimize_scalar(misalign, bounds=(ts[k - 1], ts[k + 1]), method="bounded", options={"xatol": 1e-15})
out("kPhiSuperellipse", [np.linalg.norm(grad2(r.x))])

# Contact-space point of two transformed superellipses by support maximization:
# x = s_B1(n) + s_{-B2}(n), n = world unit normal of body 1 at theta = 0.7.
A1, B1, E1 = 1.2, 0.8, 0.4
M1 = np.array([[0.9, 0.3], [-0.2, 1.1]])
A2_, B2_, E2 = 0.6, 1.4, 1.5
M2 = np.array([[1.0, -0.4], [0.25, 0.8]])
theta = 0.7
x1 = sq2_point(A1, B1, E1, theta)
g1 = np.array([2 / (A1 * E1) * np.sign(x1[0]) * abs(x1[0] / A1) ** (2 / E1 - 1),
               2 / (B1 * E1) * np.sign(x1[1]) * abs(x1[1] / B1) ** (2 / E1 - 1)])
n = np.linalg.solve(M1.T, g1)
n /= np.linalg.norm(n)
x_contact = support2(A1, B1, E1, M1, n) - support2(A2_, B2_, E2, M2, -n)
x_sum = support2(A1, B1, E1, M1, n) + support2(A2_, B2_, E2, M2, n)
out("kContactPoint2D", x_contact)
out("kSumPoint2D", x_sum)

# Distance between two transformed 3D superquadrics by constrained minimization
# over both parameter pairs, many restarts.
P1 = dict(a=1.0, b=0.7, c=1.3, e1=0.6, e2=1.2, M=np.array([[1, 0.2, 0], [0, 1, 0.3], [0.1, 0, 1.0]]),
          c0=np.zeros(3))
P2 = dict(a=0.8, b=1.1, c=0.5, e1=1.4, e2=0.3, M=np.array([[0.9, 0, 0.1], [0.2, 1.1, 0], [0, -0.3, 1.0]]),
          c0=np.array([3.1, -1.2, 1.9]))
def world3(P, v):
    ce, se, co, so = np.cos(v[0]), np.sin(v[0]), np.cos(v[1]), np.sin(v[1])
    sp = lambda x, q: np.sign(x) * abs(x) ** q
    x = np.array([P["a"] * sp(ce, P["e1"]) * sp(co, P["e2"]), P["b"] * sp(ce, P["e1"]) * sp(so, P["e2"]),
                  P["c"] * sp(se, P["e1"])])
    return P["M"] @ x + P["c0"]
best = np.inf
grid = [(e, o) for e in np.linspace(-1.4, 1.4, 9) for o in np.linspace(-3, 3, 9)]
for s1 in grid[::9]:
    for s2 in grid[::9]:
        r = minimize(lambda v: np.sum((world3(P1, v[:2]) - world3(P2, v[2:])) ** 2),
                     np.array([*s1, *s2]), method="Nelder-Mead",
                     options={"xatol": 1e-13, "fatol": 1e-26, "maxiter": 20000})
        best = min(best, np.sqrt(r.fun))
out("kDistance3D", [best])

print("\n}  // namespace oracle")
