"""Independent high-precision evaluation of the baseline design.

Prints the values frozen into tests/golden_values.hpp. Run with
`python3 tests/oracles/b0_golden.py`; requires mpmath.
"""
from mpmath import mp, mpf, pi, sqrt, cos, sin, mpc, re, log, exp

mp.dps = 40

# constants (same numbers as data/constants.txt)
G = mpf("6.67430e-11")
c = mpf(299792458)
h = mpf("6.62607015e-34")
hbar = h / (2 * pi)
kB = mpf("1.380649e-23")
M = mpf("5.9722e24")
Re_ = mpf("6.371e6")
Wearth = mpf("7.2921150e-5")
m4 = mpf("6.6465e-27")
rho = mpf(145)
c4 = mpf(238)
Gru = mpf("2.84")

# baseline geometry
A = mpf("3e-2")
l = 2 * pi * mpf("0.1")
al = mpf("3e-4")
ad = mpf("2e-4")
kd = mpf("1e4")
wd = 2 * pi * 3000
Ic = mpf("9.2e-10")
phi0 = mpf("2.3")
phiA = mpf("0.2")

kappa4 = h / m4
LJ0 = kappa4 / (2 * pi * Ic)
Ll = l / (rho * al)
beta = Ll / LJ0
Cd = (ad * rho) ** 2 / kd


def LJ(phi):
    return kappa4 / (2 * pi * Ic * cos(phi))


Leff = 1 / (1 / LJ(phi0) + 1 / Ll)
wH = 1 / sqrt(Leff * Cd)
woo = 1 / sqrt(LJ0 * Cd)


def entropy(T):
    return 2 * pi**2 * kB**4 * T**3 / (45 * hbar**3 * c4**3)


def R_l(T, w):
    bc = 1 / (rho * c4**2)
    z0 = sqrt(1 / (rho**3 * al**2 * bc))
    return z0 * pi**3 / 60 * (Gru + 1) ** 2 / (rho * hbar**3 * c4**6) * (kB * T) ** 4 * l * w


def R_J(T):
    return sqrt(pi / al**3) * l * entropy(T) * T / (2 * rho**2 * c4)


def R_d(Qd):
    return 1 / (Cd * wd * Qd)


def eps(phi, b):
    return b * (cos(phi) + 1 / b) ** mpf("1.25") / sin(phi)


def Q_H(T, Qd, fluid=True):
    if fluid:
        zj = mpc(R_J(T), wH * LJ(phi0))
        zl = mpc(R_l(T, wH), wH * Ll)
        rf = re(zj * zl / (zj + zl))
    else:
        rf = 0
    return wH * Leff / (R_d(Qd) + rf), R_d(Qd) + rf


def sqrtS(T, Qd, fluid=True):
    q, _ = Q_H(T, Qd, fluid)
    return sqrt(kB * T / q * LJ0 / woo) * eps(phi0, beta) / (phiA * A)


def x_res(T, Qd):
    _, r = Q_H(T, Qd)
    return sqrt(4 * kB * T / r) / (wH * rho * ad)


# frame dragging on the loop normal, Berkeley orientation
def vec(*a):
    return [mpf(x) for x in a]


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


deg = pi / 180
theta, chi, psi = 90 * deg, mpf("52.1") * deg, mpf("37.9") * deg
rhat = vec(sin(chi), 0, cos(chi))
# normal n with n.z = cos(theta), n.rhat = cos(psi), sin(azimuth) >= 0
nz = cos(theta)
nx = (cos(psi) - nz * cos(chi)) / sin(chi)
ny = sqrt(1 - nx**2 - nz**2)
n = [nx, ny, nz]
W = vec(0, 0, Wearth)
fd_coeff = (1 + 1 + 0) * G * M * Re_**2 / (5 * c**2 * Re_**3)
Wfd = [fd_coeff * (3 * dot(W, rhat) * rh - w) for rh, w in zip(rhat, W)]

T0 = mpf("0.010")
out = {
    "L_J0": LJ0,
    "L_l": Ll,
    "beta": beta,
    "C_d": Cd,
    "omega_H": wH,
    "f_H": wH / (2 * pi),
    "omega_oo": woo,
    "entropy_10mK": entropy(T0),
    "R_l_10mK": R_l(T0, wH),
    "R_J_10mK": R_J(T0),
    "R_d_1e5": R_d(mpf("1e5")),
    "epsilon_b0": eps(phi0, beta),
    "epsilon_2p3_0p8": eps(phi0, mpf("0.8")),
    "U_over_c2": G * M / (Re_ * c**2),
    "frame_dragging_on_normal": re(dot(Wfd, n)),
    "Q_H_1e4": Q_H(T0, mpf("1e4"))[0],
    "Q_H_1e5": Q_H(T0, mpf("1e5"))[0],
    "Q_H_1e9": Q_H(T0, mpf("1e9"))[0],
    "sqrtS_1e4": sqrtS(T0, mpf("1e4")),
    "sqrtS_1e5": sqrtS(T0, mpf("1e5")),
    "sqrtS_1e9": sqrtS(T0, mpf("1e9")),
    "sqrtS_1e9_dashed": sqrtS(T0, mpf("1e9"), False),
    "sqrtS_tau_1e9": 2 * A / c**2 * sqrtS(T0, mpf("1e9")),
    "x_res_1e4": x_res(T0, mpf("1e4")),
    "critical_velocity_2um": Ic / (rho * pi * mpf("1e-6") ** 2),
}
for k, v in out.items():
    print(f"{k} = {mp.nstr(v, 17)}")
