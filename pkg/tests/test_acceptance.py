"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from unicrit.adelic import pairing_global, product_formula_check
from unicrit.arch import cover_check_d2, cover_check_dgt2, green_arch, pairing_arch
from unicrit.exact_core import exact_orbit, find_common_preperiodic
from unicrit.harness import grid_pairs, verify_grid
from unicrit.nonarch import green_nonarch, newton_root_structure, root_hypothesis_holds, valuation

GRID_D2 = [0, 1, 2, F(1, 2), 10**6]
GRID_D3 = [0, 1, 2]


class Gate:
    def __init__(self, capsys, label: str, limit: float | None = None):
        self.capsys, self.label, self.limit = capsys, label, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.checks = []
        return self

    def check(self, ok: bool, what: str):
        self.checks.append((bool(ok), what))

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if self.limit is not None:
            self.check(elapsed < self.limit, f"runtime {elapsed:.1f}s < {self.limit:g}s")
        ok = exc_type is None and all(c for c, _ in self.checks)
        failed = [w for c, w in self.checks if not c]
        detail = "; ".join(failed) if failed else "; ".join(w for _, w in self.checks)
        if exc_type is not None:
            detail = f"{exc_type.__name__}: {exc}"
        with self.capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {self.label} ({elapsed:.2f}s): {detail}")
        if exc_type is None:
            assert ok, detail
        return False


def test_criterion_01_common_preperiodic_search(capsys):
    with Gate(capsys, "criterion 1: common preperiodic parameters for (0, 1)", 5) as g:
        S = find_common_preperiodic(0, 1, 2, 4)
        linear = {-f.coeffs[0] for f in S.factors if f.degree == 1}
        g.check(S.total_count >= 3, f"total_count {S.total_count} >= 3")
        g.check({0, -1, -2} <= linear, "roots 0, -1, -2 present")
        # independent oracle: exact rational orbits of both marked points repeat
        for t in (0, -1, -2):
            g.check(exact_orbit(0, 2, t, 20)[1] is not None and exact_orbit(1, 2, t, 20)[1] is not None,
                    f"t={t} preperiodic for 0 and 1")


def test_criterion_02_capacity_normalization(capsys):
    with Gate(capsys, "criterion 2: log|t| sandwich for g_0, d=2", 10) as g:
        rng = random.Random(2024)
        worst = 0.0
        for _ in range(100):
            r = 10 ** rng.uniform(3, 8)
            th = rng.uniform(0, 2 * math.pi)
            t = (F(r * math.cos(th)), F(r * math.sin(th)))
            val = green_arch(0, 2, t)
            logt = 0.5 * math.log(float(t[0] ** 2 + t[1] ** 2))
            worst = max(worst, abs(val.hi - logt), abs(val.lo - logt))
        g.check(worst <= 1, f"max |g - log|t|| = {worst:.3g} <= 1 over 100 points")
        top = green_arch(0, 2, 10**8)
        gap = max(abs(top.hi - math.log(1e8)), abs(top.lo - math.log(1e8)))
        g.check(gap < 0.01, f"gap at 1e8 = {gap:.3g} < 0.01")


def test_criterion_03_disk_covers(capsys):
    with Gate(capsys, "criterion 3: disk covers", 30) as g:
        r2 = cover_check_d2(30, 4)
        r3 = cover_check_dgt2(10, 3, 3)
        for name, rep in (("d=2", r2), ("d=3", r3)):
            g.check(rep.passed and not rep.counterexamples, f"{name} covers pass with 0 counterexamples")
        g.check(r2.covers["two_disk"]["counts"]["4"] == [4, 4], "two-disk counts 2^(k-2)")
        g.check(r2.covers["four_disk"]["counts"]["4"] == [2, 2, 2, 2], "four-disk counts at k=4")
        g.check(r3.covers["d_disk"]["counts"]["3"] == [3, 3, 3], "d-disk counts d^(k-2)")


def test_criterion_04_newton_polygon(capsys):
    with Gate(capsys, "criterion 4: p-adic root valuations and spacing", 10) as g:
        rep = newton_root_structure(F(1, 8), 2, 2, 2)
        g.check(rep.polygon.root_valuations() == [-6, -6], "both roots have |s|_2 = 64")
        g.check(rep.spacing_ok and rep.min_spacing_valuation < rep.spacing_bound_valuation,
                f"gap 2^{-rep.min_spacing_valuation} > bound 2^{-rep.spacing_bound_valuation}")
        rng = random.Random(4)
        hits = 0
        while hits < 20:
            p = rng.choice([2, 3, 5, 7])
            d = rng.choice([2, 3])
            a = F(rng.choice([1, -1]) * rng.randint(1, 30), p ** rng.randint(1, 3))
            if a.numerator % p == 0 or not root_hypothesis_holds(a, d, p):
                continue
            n = rng.randint(1, 4 if d == 2 else 3)
            r = newton_root_structure(a, d, p, n)
            hits += 1
            if not (r.valuations_ok and all(v == d * valuation(a, p) for v in r.polygon.root_valuations())):
                g.check(False, f"valuation mismatch at a={a}, d={d}, p={p}, n={n}")
        g.check(True, "20 random (a, p) have every root at |a|_p^d")


@pytest.mark.xfail(strict=True, reason="the stated gap 2^5 uses discriminant 1085/1024; the exact discriminant "
                                       "is 17/16, giving gap 2^2 (which still beats the bound 2)")
def test_criterion_04_stated_gap_value(capsys):
    with Gate(capsys, "criterion 4 (stated value): root gap 2^5 for a=1/8", None) as g:
        rep = newton_root_structure(F(1, 8), 2, 2, 2)
        g.check(rep.min_spacing_valuation == -5, f"computed gap 2^{-rep.min_spacing_valuation}, stated 2^5")


def closed_form(a: F, d: int, p: int, t: F) -> F:
    A = max(0, -valuation(a, p))
    lt = -valuation(t, p) if t != 0 else -math.inf
    if A == 0:
        return F(max(0, lt))
    return F(d * A) if lt < d * A else F(lt)


def test_criterion_05_nonarch_closed_forms(capsys):
    with Gate(capsys, "criterion 5: p-adic Green closed forms", 5) as g:
        rng = random.Random(5)
        done = 0
        while done < 200:
            p = rng.choice([2, 3, 5, 7, 11])
            d = rng.choice([2, 3, 4])
            a = F(rng.randint(-50, 50), rng.randint(1, 50)) * F(p) ** rng.randint(-3, 2)
            t = F(rng.randint(-50, 50), rng.randint(1, 50)) * F(p) ** rng.randint(-8, 3)
            if a != 0 and -valuation(a, p) > 0 and t != 0 and -valuation(t, p) == -d * valuation(a, p):
                continue
            val = green_nonarch(a, d, p, t)
            done += 1
            if not (val.exact and val.lo == closed_form(a, d, p, t)):
                g.check(False, f"mismatch at a={a}, d={d}, p={p}, t={t}")
        g.check(True, "200 zero-width exact matches")


def test_criterion_06_product_formula(capsys):
    with Gate(capsys, "criterion 6: product formula", None) as g:
        rng = random.Random(6)
        bad = 0
        for _ in range(100):
            x = F(rng.randint(1, 10**9) * rng.choice([1, -1]), rng.randint(1, 10**9))
            bad += product_formula_check(x) != 0
        g.check(bad == 0, f"{100 - bad}/100 exact zero residuals")


def test_criterion_07_theorem_suite(capsys):
    with Gate(capsys, "criterion 7: lower-bound theorem grids", 300) as g:
        verified = violated = 0
        for d, values in ((2, GRID_D2), (3, GRID_D3)):
            pairs = grid_pairs(values, d)
            for thm in ("thm1.3", "thm4.13"):
                for v in verify_grid(thm, pairs, d, jobs=8):
                    verified += v.verdict == "verified"
                    violated += v.verdict == "violated"
        g.check(violated == 0, "no violated verdicts")
        g.check(verified >= 3, f"{verified} verified grid points")


SYMMETRY_PAIRS = [(0, 1), (0, 2), (1, 2), (F(1, 2), 1), (F(1, 3), 1), (F(1, 2), F(3, 2)), (-1, 2), (0, F(1, 2)),
                  (2, 3), (F(2, 3), F(1, 2))]


def test_criterion_08_pairing_symmetry(capsys):
    with Gate(capsys, "criterion 8: global pairing swap symmetry", 120) as g:
        for a, b in SYMMETRY_PAIRS:
            x = pairing_global(a, b, 2).total
            y = pairing_global(b, a, 2).total
            if not x.intersects(y):
                g.check(False, f"({a}, {b}): {x.lo:.5f}..{x.hi:.5f} vs {y.lo:.5f}..{y.hi:.5f}")
        g.check(True, "10 pairs intersect")


def test_criterion_09_estimator_convergence(capsys):
    with Gate(capsys, "criterion 9: estimator gaps for (0, 1), n = 6, 7, 8", None) as g:
        est = pairing_arch(0, 1, 2, 8)
        e8, e7, e6 = (v.mid for v in est.history)
        g76, g87 = abs(e7 - e6), abs(e8 - e7)
        g.check(g87 < g76, f"estimates {e6:.6f}, {e7:.6f}, {e8:.6f}; gaps {g76:.3g} > {g87:.3g}")


def _cli(*args) -> bytes:
    return subprocess.run([sys.executable, "-m", "unicrit.cli", *args], check=False,
                          capture_output=True, env={"PATH": "/usr/bin:/bin"}).stdout


def test_criterion_10_determinism(capsys):
    with Gate(capsys, "criterion 10: --jobs 1 and --jobs 8 give identical JSON", None) as g:
        runs = []
        for d, values in ((2, GRID_D2), (3, GRID_D3)):
            grid = ",".join(str(v) for v in values)
            for thm in ("thm1.3", "thm4.13"):
                base = ["verify", thm, "--grid", grid, "--d", str(d)]
                runs.append((f"{thm} d={d}", _cli(*base, "--jobs", "1"), _cli(*base, "--jobs", "8")))
        for name, one, eight in runs:
            g.check(one and one == eight, f"{name}: {len(one)} bytes identical")
