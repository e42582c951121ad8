#!/usr/bin/env python3
"""Emit Taylor coefficients (in x = p - 1/2) of the Riemann-Siegel
correction functions C0..C4 as a C++ header.

    python3 tools/gen_rs_coefficients.py > tools/rs_coefficients.hpp
"""
import mpmath as mp

mp.mp.dps = 80
DEG = 60


def phi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def deriv(coeffs, k):
    out = []
    for i in range(k, len(coeffs)):
        f = mp.mpf(1)
        for j in range(k):
            f *= i - j
        out.append(coeffs[i] * f)
    return out + [mp.mpf(0)] * k


def combine(*terms):
    out = [mp.mpf(0)] * (DEG + 1)
    for scale, c in terms:
        for i in range(DEG + 1):
            out[i] += scale * c[i]
    return out


def series_phi(deg):
    # phi(1/2 + x) = -cos(2 pi x^2 - 5 pi / 8) / cos(2 pi x), divided as power series
    num = [mp.mpf(0)] * (deg + 1)
    for m in range(deg // 2 + 1):
        # cos(A - B) with A = 2 pi x^2: sum over Taylor terms of cos/sin in A
        k = 2 * m
        term = (2 * mp.pi) ** m / mp.factorial(m)
        b = 5 * mp.pi / 8
        # d^m/dA^m cos(A - b) at A = 0 is cos(m pi / 2 - b)
        num[k] = -term * mp.cos(m * mp.pi / 2 - b)
    den = [mp.mpf(0)] * (deg + 1)
    for m in range(deg // 2 + 1):
        den[2 * m] = (-1) ** m * (2 * mp.pi) ** (2 * m) / mp.factorial(2 * m)
    out = [mp.mpf(0)] * (deg + 1)
    for i in range(deg + 1):
        s = num[i] - sum(out[j] * den[i - j] for j in range(i))
        out[i] = s / den[0]
    return out


c = series_phi(DEG)
assert abs(mp.polyval(c[::-1], mp.mpf('0.2')) - phi(mp.mpf('0.7'))) < mp.mpf('1e-30')
pi2 = mp.pi ** 2
d = {k: deriv(c, k) for k in range(13)}
C = [
    c,
    combine((-1 / (96 * pi2), d[3])),
    combine((1 / (64 * pi2), d[2]), (1 / (18432 * pi2 ** 2), d[6])),
    combine((-1 / (64 * pi2), d[1]), (-1 / (3840 * pi2 ** 2), d[5]),
            (-1 / (5308416 * pi2 ** 3), d[9])),
    combine((1 / (128 * pi2), d[0]), (19 / (24576 * pi2 ** 2), d[4]),
            (11 / (5898240 * pi2 ** 3), d[8]),
            (1 / (2038431744 * pi2 ** 4), d[12])),
]

print("// Generated by tools/gen_rs_coefficients.py; do not edit.")
print("#pragma once\n")
print("#include <array>\n")
print("namespace rs {\n")
print(f"inline constexpr int kDegree = {DEG};\n")
print(f"inline constexpr std::array<std::array<double, {DEG + 1}>, 5> kCorrection = {{{{")
for arr in C:
    print("    {{")
    for i in range(0, DEG + 1, 3):
        print("        " + ", ".join(mp.nstr(v, 20, min_fixed=0, max_fixed=0) for v in arr[i:i + 3]) + ",")
    print("    }},")
print("}};\n")
print("}  // namespace rs")
