"""Independent reference for the SP800-22 p-values frozen in the Rust tests.

Uses numpy/scipy special functions and a direct numpy FFT; shares no code
with the Rust implementation. Run with `python3 sp800_22_oracle.py`.
"""
import hashlib
import math

import numpy as np
from scipy.special import erfc, gammaincc
from scipy.stats import norm

PI_100 = ("1100100100001111110110101010001000100001011010001100"
          "001000110100110001001100011001100010100010111000")
# 128 bits, exercises the M=8 longest-run table
LONGEST_128 = ("11001100000101010110110001001100111000000000001001"
               "00110101010001000100111101011010000000110101111100"
               "1100111001101101100010110010")


def counter_stream(nbits):
    out = []
    i = 0
    while len(out) < nbits:
        d = hashlib.sha256(i.to_bytes(4, "big")).digest()
        for byte in d:
            for k in range(7, -1, -1):
                out.append((byte >> k) & 1)
        i += 1
    return np.array(out[:nbits], dtype=np.int64)


def frequency(e):
    n = len(e)
    s = np.sum(2 * e - 1)
    return erfc(abs(s) / math.sqrt(n) / math.sqrt(2))


def block_frequency(e, M):
    n = len(e)
    N = n // M
    pis = e[: N * M].reshape(N, M).mean(axis=1)
    chi2 = 4 * M * np.sum((pis - 0.5) ** 2)
    return gammaincc(N / 2, chi2 / 2)


def cusum(e, reverse):
    n = len(e)
    x = 2 * e - 1
    if reverse:
        x = x[::-1]
    z = int(np.max(np.abs(np.cumsum(x))))

    def trunc_div(a, b):
        return int(a / b) if a * b >= 0 else -int(-a / b)

    s1 = 0.0
    k = trunc_div(trunc_div(-n, z) + 1, 4)
    while k <= trunc_div(trunc_div(n, z) - 1, 4):
        s1 += norm.cdf((4 * k + 1) * z / math.sqrt(n)) - norm.cdf((4 * k - 1) * z / math.sqrt(n))
        k += 1
    s2 = 0.0
    k = trunc_div(trunc_div(-n, z) - 3, 4)
    while k <= trunc_div(trunc_div(n, z) - 1, 4):
        s2 += norm.cdf((4 * k + 3) * z / math.sqrt(n)) - norm.cdf((4 * k + 1) * z / math.sqrt(n))
        k += 1
    return 1 - s1 + s2


def runs(e):
    n = len(e)
    pi = e.mean()
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return 0.0
    v = 1 + np.sum(e[1:] != e[:-1])
    return erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))


def longest_run(e):
    n = len(e)
    if n < 6272:
        M, lo, hi, pis = 8, 1, 4, [0.2148, 0.3672, 0.2305, 0.2266]
    elif n < 750000:
        M, lo, hi, pis = 128, 4, 9, [0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124]
    else:
        M, lo, hi, pis = 10000, 10, 16, [0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727]
    N = n // M
    nu = [0] * len(pis)
    for b in range(N):
        blk = e[b * M:(b + 1) * M]
        best = cur = 0
        for bit in blk:
            cur = cur + 1 if bit else 0
            best = max(best, cur)
        nu[min(max(best, lo), hi) - lo] += 1
    chi2 = sum((nu[i] - N * pis[i]) ** 2 / (N * pis[i]) for i in range(len(pis)))
    return gammaincc((len(pis) - 1) / 2, chi2 / 2)


def rank_probs(m=32, q=32):
    def p(r):
        prod = 1.0
        for i in range(r):
            prod *= (1 - 2.0 ** (i - q)) * (1 - 2.0 ** (i - m)) / (1 - 2.0 ** (i - r))
        return 2.0 ** (r * (q + m - r) - m * q) * prod
    a, b = p(32), p(31)
    return [a, b, 1 - a - b]


def gf2_rank(mat):
    mat = mat.copy() % 2
    rows, cols = mat.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if mat[i, c]:
                piv = i
                break
        if piv is None:
            continue
        mat[[r, piv]] = mat[[piv, r]]
        for i in range(rows):
            if i != r and mat[i, c]:
                mat[i] ^= mat[r]
        r += 1
    return r


def rank(e):
    n = len(e)
    N = n // 1024
    f = [0, 0, 0]
    for k in range(N):
        r = gf2_rank(e[k * 1024:(k + 1) * 1024].reshape(32, 32))
        f[0 if r == 32 else 1 if r == 31 else 2] += 1
    ps = rank_probs()
    chi2 = sum((f[i] - N * ps[i]) ** 2 / (N * ps[i]) for i in range(3))
    return math.exp(-chi2 / 2)


def spectral(e):
    n = len(e)
    x = 2 * e - 1
    mags = np.abs(np.fft.fft(x))[: n // 2]
    t = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2
    n1 = np.sum(mags < t)
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4)
    return erfc(abs(d) / math.sqrt(2))


def pattern_counts(e, m):
    n = len(e)
    if m == 0:
        return np.array([n])
    ext = np.concatenate([e, e[: m - 1]])
    counts = np.zeros(2 ** m, dtype=np.int64)
    for i in range(n):
        v = 0
        for j in range(m):
            v = (v << 1) | int(ext[i + j])
        counts[v] += 1
    return counts


def approximate_entropy(e, m):
    n = len(e)

    def phi(mm):
        c = pattern_counts(e, mm) / n
        c = c[c > 0]
        return float(np.sum(c * np.log(c)))

    apen = phi(m) - phi(m + 1)
    chi2 = 2 * n * (math.log(2) - apen)
    return gammaincc(2 ** (m - 1), chi2 / 2)


def serial(e, m):
    n = len(e)

    def psi(mm):
        if mm <= 0:
            return 0.0
        c = pattern_counts(e, mm)
        return (2 ** mm / n) * float(np.sum(c.astype(float) ** 2)) - n

    d1 = psi(m) - psi(m - 1)
    d2 = psi(m) - 2 * psi(m - 1) + psi(m - 2)
    return gammaincc(2 ** (m - 2), d1 / 2), gammaincc(2 ** (m - 3), d2 / 2)


def bm(s):
    n = len(s)
    c = [0] * (n + 1); b = [0] * (n + 1)
    c[0] = b[0] = 1
    L, m = 0, -1
    for i in range(n):
        d = s[i]
        for j in range(1, L + 1):
            d ^= c[j] & s[i - j]
        if d:
            t = c[:]
            for j in range(0, n - i + m + 1):
                if i - m + j <= n:
                    c[i - m + j] ^= b[j]
            if L <= i // 2:
                L, m, b = i + 1 - L, i, t
    return L


def linear_complexity(e, M):
    n = len(e)
    N = n // M
    mu = M / 2 + (9 + (-1) ** (M + 1)) / 36 - (M / 3 + 2 / 9) / 2 ** M
    pis = [0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833]
    nu = [0] * 7
    for k in range(N):
        L = bm([int(x) for x in e[k * M:(k + 1) * M]])
        t = (-1) ** M * (L - mu) + 2 / 9
        if t <= -2.5: nu[0] += 1
        elif t <= -1.5: nu[1] += 1
        elif t <= -0.5: nu[2] += 1
        elif t <= 0.5: nu[3] += 1
        elif t <= 1.5: nu[4] += 1
        elif t <= 2.5: nu[5] += 1
        else: nu[6] += 1
    chi2 = sum((nu[i] - N * pis[i]) ** 2 / (N * pis[i]) for i in range(7))
    return gammaincc(3, chi2 / 2)


def bits(s):
    return np.array([int(c) for c in s], dtype=np.int64)


if __name__ == "__main__":
    pi = bits(PI_100)
    print("pi100 frequency", repr(frequency(pi)))
    print("pi100 block_frequency M=10", repr(block_frequency(pi, 10)))
    print("pi100 cusum fwd", repr(cusum(pi, False)), "bwd", repr(cusum(pi, True)))
    print("pi100 runs", repr(runs(pi)))
    print("pi100 apen m=2", repr(approximate_entropy(pi, 2)))
    print("pi100 serial m=2", serial(pi, 2))
    print("pi100 spectral", repr(spectral(pi)))
    print("short 1011010101 frequency", repr(frequency(bits("1011010101"))))
    print("short 1011010111 cusum fwd", repr(cusum(bits("1011010111"), False)))
    print("short 0110011010 block M=3", repr(block_frequency(bits("0110011010"), 3)))
    print("short 1001101011 runs", repr(runs(bits("1001101011"))))
    print("short 0100110101 apen m=3", repr(approximate_entropy(bits("0100110101"), 3)))
    print("short 0011011101 serial m=3", serial(bits("0011011101"), 3))
    print("short 1001010011 spectral", repr(spectral(bits("1001010011"))))
    print("longest 128", repr(longest_run(bits(LONGEST_128))))
    print("bm 1101011110001", bm([int(c) for c in "1101011110001"]))
    print("rank probs", rank_probs())

    e = counter_stream(100_000)
    print("counter ones", int(e.sum()))
    print("counter frequency", repr(frequency(e)))
    print("counter block_frequency M=128", repr(block_frequency(e, 128)))
    print("counter cusum", repr(cusum(e, False)), repr(cusum(e, True)))
    print("counter runs", repr(runs(e)))
    print("counter longest_run", repr(longest_run(e)))
    print("counter rank", repr(rank(e)))
    print("counter spectral", repr(spectral(e)))
    print("counter apen m=10", repr(approximate_entropy(e, 10)))
    print("counter serial m=14", serial(e, 14))
    print("counter linear_complexity M=500", repr(linear_complexity(e, 500)))
