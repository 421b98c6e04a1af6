"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` for just the summary.
"""

import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from paritycat.cats import CatParams
from paritycat.limits import (
    SphericalDirection,
    direction_components,
    directional_spectrum,
    lambda_ho,
    lambda_infinity_d2,
    origin_spectrum,
    spectrum_at,
    thermodynamic_spectrum,
    unit_spectrum,
)
from paritycat.oracle import random_case, verify_spectrum
from paritycat.rng import SplitMix64
from paritycat.schmidt import (
    dimension_table,
    numerical_rank,
    rank_formula,
    schmidt_eigenvalues,
    von_neumann_entropy,
)
from paritycat.states import CSLabel

SEED = 20240601


def report(number, title, passed, detail):
    line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    print(line, file=sys.__stdout__, flush=True)
    return passed


def _valid_parity(rng, D, N):
    while True:
        c = int(rng.integers(0, 1 << (D - 1)))
        if bin(c).count("1") <= N:
            return c


def check_trace_one():
    rng = np.random.default_rng(SEED)
    cases = []
    for _ in range(1000):
        D = int(rng.integers(2, 6))
        N = int(rng.integers(2, 13))
        M = int(rng.integers(1, N // 2 + 1))
        cases.append((tuple(rng.uniform(0.0, 3.0, D - 1)), _valid_parity(rng, D, N), N, M))
    start = time.perf_counter()
    worst = max(abs(math.fsum(spectrum_at(CSLabel(z), c, N, M).lambdas) - 1.0) for z, c, N, M in cases)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 2.0
    return report(1, "trace one", ok, f"max |sum - 1| = {worst:.2e} (<= 1e-12), {elapsed:.2f} s (< 2 s)")


def check_oracle():
    gen = SplitMix64(SEED)
    cases = [random_case(gen, dims=(2, 3, 4), max_N=8) for _ in range(50)]
    start = time.perf_counter()
    worst = max(verify_spectrum(p, M).max_deviation for p, M in cases)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30.0
    return report(2, "oracle equivalence", ok, f"max deviation {worst:.2e} (<= 1e-9), {elapsed:.2f} s (< 30 s)")


def check_d2_unit():
    dev_l = dev_s = 0.0
    for N in range(2, 13):
        for M in range(1, N):
            for c in (0, 1):
                s = schmidt_eigenvalues(CSLabel((1.0,)), c, N, M)
                dev_l = max(dev_l, float(np.max(np.abs(s.lambdas - 0.5))))
                if M == 1:
                    dev_s = max(dev_s, abs(von_neumann_entropy(s, 2) - 1.0))
    ok = dev_l <= 1e-12 and dev_s <= 1e-12
    return report(3, "D=2 maximal mixing", ok, f"max |lambda - 1/2| = {dev_l:.2e}, max |S - 1| = {dev_s:.2e} (<= 1e-12)")


def check_origin():
    worst = 0.0
    for D in (2, 3):
        for N in range(2, 11):
            for M in range(1, N // 2 + 1):
                for c in range(1 << (D - 1)):
                    if bin(c).count("1") > N:
                        continue
                    small = schmidt_eigenvalues(CSLabel((1e-5,) * (D - 1)), c, N, M).lambdas
                    worst = max(worst, float(np.max(np.abs(small - origin_spectrum(D, N, M, c).lambdas))))
    exact = list(origin_spectrum(3, 6, 3, 0b11).lambdas) == [0.2, 0.3, 0.3, 0.2]
    ok = worst <= 1e-3 and exact
    return report(4, "origin limits", ok, f"max deviation at |z|=1e-5 {worst:.2e} (<= 1e-3), D=3 N=6 M=3 c=[1,1] exact: {exact}")


def check_unit_d3():
    worst_zero = 0.0
    for N in range(2, 13):
        for c in range(4):
            if bin(c).count("1") > N:
                continue
            worst_zero = max(worst_zero, schmidt_eigenvalues(CSLabel((1.0, 1.0)), c, N, 1)[0b11])
            if N >= 2:
                worst_zero = max(worst_zero, unit_spectrum(3, N, 1, c)[0b11])
    finite = schmidt_eigenvalues(CSLabel((1.0, 1.0)), 0, 6, 1).lambdas[:3]
    closed = unit_spectrum(3, 6, 1, 0).lambdas[:3]
    dev = float(max(np.max(np.abs(finite - 1 / 3)), np.max(np.abs(closed - 1 / 3))))
    ok = worst_zero <= 1e-12 and dev <= 1e-12
    return report(5, "unit point D=3", ok, f"max lambda_[1,1] = {worst_zero:.2e} (<= 1e-12), max |lambda - 1/3| = {dev:.2e} (<= 1e-12)")


def check_thermodynamic():
    z = CSLabel((0.7, 1.2))
    worst = 0.0
    for M in (1, 2, 3):
        lim = thermodynamic_spectrum(z, M).lambdas
        for c in range(4):
            worst = max(worst, float(np.max(np.abs(schmidt_eigenvalues(z, c, 2000, M).lambdas - lim))))
    ok = worst <= 1e-9
    return report(6, "thermodynamic limit", ok, f"max deviation at N=2000 over c and M: {worst:.2e} (<= 1e-9)")


def check_rescaled():
    alpha, eta = 1.3, 2 / 3

    def deviation(N):
        M = round((1 - eta) * N)
        z = CSLabel((alpha / math.sqrt(N),))
        return max(abs(schmidt_eigenvalues(z, c, N, M)[cp] - lambda_ho(alpha, c, cp, eta))
                   for c in (0, 1) for cp in (0, 1))

    d300, d1200 = deviation(300), deviation(1200)
    half = all(lambda_ho(a, 1, cp, 0.5) == 0.5 for a in (0.3, 1.3, 4.0) for cp in (0, 1))
    high = lambda_ho(0.5, 0, 0, 0.999)
    ok = d300 <= 5e-3 and d1200 <= 0.5 * d300 and half and high >= 0.99
    return report(7, "rescaled double limit", ok,
                  f"dev N=300 {d300:.2e} (<= 5e-3), N=1200 {d1200:.2e} (<= {0.5 * d300:.2e}), "
                  f"eta=1/2 odd exactly 1/2: {half}, lambda(eta=0.999, alpha=0.5) = {high:.5f} (>= 0.99)")


def check_rank():
    rng = np.random.default_rng(SEED)
    mismatches = []
    for _ in range(200):
        D = int(rng.integers(2, 6))
        M = int(rng.integers(1, 4))
        mags = rng.uniform(0.2, 3.0, D - 1) * (rng.random(D - 1) < 0.6)
        c = int(rng.integers(0, 1 << (D - 1)))
        N = max(2 * M, bin(c).count("1")) + int(rng.integers(0, 5))
        z = CSLabel(tuple(mags))
        got = numerical_rank(spectrum_at(z, c, N, M), tol=1e-10)
        want = rank_formula(z, c, M, D)
        if got != want:
            mismatches.append((D, N, M, c, tuple(round(float(m), 2) for m in mags), got, want))
    table = {(r["D"], r["M"]): (r["full"], r["symmetric"], r["cats"])
             for r in dimension_table([(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)])}
    expected = {(2, 1): (2, 2, 2), (3, 1): (3, 3, 4), (3, 2): (9, 6, 4), (4, 1): (4, 4, 8),
                (4, 2): (16, 10, 8), (5, 1): (5, 5, 16), (5, 2): (25, 15, 16), (5, 3): (125, 35, 16)}
    table_ok = table == expected
    ok = not mismatches and table_ok
    example = f", e.g. (D,N,M,c,|z|,rank,formula)={mismatches[0]}" if mismatches else ""
    return report(8, "rank formulas", ok,
                  f"{200 - len(mismatches)}/200 ranks equal the formula{example}; dimension table exact: {table_ok}")


def check_infinity_d2():
    worst = 0.0
    for N in range(2, 11):
        for M in range(1, N // 2 + 1):
            for c in (0, 1):
                s = schmidt_eigenvalues(CSLabel((1e3,)), c, N, M)
                for cp in (0, 1):
                    worst = max(worst, abs(s[cp] - lambda_infinity_d2(N, M, c, cp)))
    ok = worst <= 1e-4
    return report(9, "D=2 infinity limit", ok, f"max deviation at |z|=1e3: {worst:.2e} (<= 1e-4)")


def check_isentropic_rays():
    thetas = np.linspace(0.0, math.pi / 2, 50)
    ray = lim = 0.0
    # c=[0,0]: the only parity whose limit formula is determinate on the whole grid at N=6
    for c in (0b00,):
        for t in thetas:
            d = SphericalDirection((float(t),), 3)
            y = direction_components(d)
            s20 = von_neumann_entropy(spectrum_at(CSLabel(tuple(20 * y)), c, 6, 1))
            s30 = von_neumann_entropy(spectrum_at(CSLabel(tuple(30 * y)), c, 6, 1))
            s_inf = von_neumann_entropy(directional_spectrum(d, c, 6, 1))
            ray = max(ray, abs(s20 - s30))
            lim = max(lim, abs(s20 - s_inf), abs(s30 - s_inf))
    ok = ray <= 1e-3 and lim <= 1e-4
    return report(10, "isentropic rays", ok, f"max |S(20) - S(30)| = {ray:.2e} (<= 1e-3), max |S(R) - S_limit| = {lim:.2e} (<= 1e-4)")


def check_determinism():
    base = [sys.executable, "-m", "paritycat", "infodiag", "--dim", "3", "--particles", "6",
            "--traced", "1", "--seed", "11", "--samples", "3000", "--range", "0:3"]
    with tempfile.TemporaryDirectory() as tmp:
        blobs = []
        for name, workers in (("first", "1"), ("second", "1"), ("parallel", "8")):
            path = Path(tmp) / f"{name}.csv"
            subprocess.run(base + ["--workers", workers, "--out", str(path)], check=True)
            blobs.append(path.read_bytes())
    same_seed = blobs[0] == blobs[1]
    workers = blobs[0] == blobs[2]
    ok = same_seed and workers and len(blobs[0]) > 0
    return report(11, "determinism", ok, f"repeat run identical: {same_seed}, 1 vs 8 workers identical: {workers}")


def test_criterion_01_trace_one():
    assert check_trace_one()


def test_criterion_02_oracle_equivalence():
    assert check_oracle()


def test_criterion_03_d2_maximal_mixing():
    assert check_d2_unit()


def test_criterion_04_origin_limits():
    assert check_origin()


def test_criterion_05_unit_point_d3():
    assert check_unit_d3()


def test_criterion_06_thermodynamic_limit():
    assert check_thermodynamic()


def test_criterion_07_rescaled_double_limit():
    assert check_rescaled()


def test_criterion_08_rank_formulas():
    assert check_rank()


def test_criterion_09_d2_infinity_limit():
    assert check_infinity_d2()


def test_criterion_10_isentropic_rays():
    assert check_isentropic_rays()


def test_criterion_11_determinism():
    assert check_determinism()


if __name__ == "__main__":
    checks = [check_trace_one, check_oracle, check_d2_unit, check_origin, check_unit_d3,
              check_thermodynamic, check_rescaled, check_rank, check_infinity_d2,
              check_isentropic_rays, check_determinism]
    results = [check() for check in checks]
    print(f"{sum(results)}/{len(results)} criteria pass")
