"""Quick invariant suites behind ``ffm verify``.

Each suite returns a list of ``Check(name, passed, detail)``; they are scaled
down versions of the test-suite properties so they run in seconds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import characters, finite_field, partitions, polyring, rmt
from .errors import BadCongruence
from .partitions import Partition


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _run(suite, name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, bool(ok), detail)


def _random_monic(rng, q, deg):
    return polyring.Poly.monic_from_low([rng.randrange(q) for _ in range(deg)], q)


# ---------------------------------------------------------------------------


def suite_field():
    def contexts():
        ok = finite_field.make_context(7, 3).g == 3 and finite_field.make_context(13, 2).g == 2
        try:
            finite_field.make_context(7, 2)
            ok = False
        except BadCongruence:
            pass
        return ok, "g(7)=3, g(13)=2, (7,2) rejected"

    def multiplicative():
        worst = 0.0
        for q, r in ((7, 3), (13, 2), (13, 3)):
            ctx = finite_field.make_context(q, r)
            for a in range(1, q):
                for b in range(1, q):
                    lhs = finite_field.embed_unity(ctx, a * b % q)
                    worst = max(worst, abs(lhs - finite_field.embed_unity(ctx, a) * finite_field.embed_unity(ctx, b)))
        return worst < 1e-12, f"max error {worst:.1e}"

    def rth_powers():
        ok = True
        for q, r in ((7, 3), (13, 2), (13, 3), (13, 6)):
            ctx = finite_field.make_context(q, r)
            image = {finite_field.mu_r_index(ctx, pow(x, (q - 1) // r, q)) for x in range(1, q)}
            ok &= image == set(range(r))
        return ok, "image of x^((q-1)/r) is all r-th roots of unity"

    return [_run("field", "make_context", contexts), _run("field", "embed multiplicative", multiplicative),
            _run("field", "r-th power image", rth_powers)]


def suite_poly():
    def prime_tables():
        bad = [(q, d) for q in (5, 7) for d in range(1, 5)
               if len(polyring.irreducible_array(q, d)) != polyring.prime_count(q, d)]
        return not bad, f"mismatches {bad}"

    def ppt():
        bad = []
        for q in (5, 7):
            for n in (1, 2, 3):
                total = sum(polyring.von_mangoldt(polyring.Poly.monic_from_low(low, q))
                            for low in polyring.monic_coeff_array(q, n))
                if total != q**n:
                    bad.append((q, n, total))
        return not bad, f"sum of von Mangoldt over degree n equals q^n; failures {bad}"

    def roundtrip():
        rng = random.Random(1)
        for _ in range(200):
            q = rng.choice((5, 7, 13))
            F = _random_monic(rng, q, rng.randint(1, 8))
            if polyring.factor(F).expand(q) != F:
                return False, f"factor round trip failed for {F}"
        return True, "200 random polynomials"

    def family_counts():
        bad = []
        for q, r, N in ((5, 2, 3), (7, 3, 4), (7, 3, 2)):
            ctx = finite_field.make_context(q, r)
            if polyring.count_family(ctx, N) != polyring.family_size_formula(q, r, N):
                bad.append((q, r, N))
        return not bad, f"failures {bad}"

    return [_run("poly", "prime tables", prime_tables), _run("poly", "prime polynomial theorem", ppt),
            _run("poly", "factor round trip", roundtrip), _run("poly", "family counts", family_counts)]


def suite_char():
    def laws():
        rng = random.Random(2)
        ctx = finite_field.make_context(7, 3)
        worst = 0.0
        for _ in range(100):
            G = _random_monic(rng, 7, rng.randint(1, 3))
            if not polyring.is_power_free(G, 3):
                continue
            chi = characters.Character(ctx, G)
            F1, F2 = _random_monic(rng, 7, rng.randint(1, 4)), _random_monic(rng, 7, rng.randint(1, 4))
            worst = max(worst, abs(chi(F1 * F2) - chi(F1) * chi(F2)))
            if polyring.gcd(F1, G).deg == 0 and polyring.is_power_free(F1, 3):
                worst = max(worst, abs(chi(F1) - characters.Character(ctx, F1)(G)))
        return worst < 1e-10, f"max error {worst:.1e}"

    def routes():
        rng = random.Random(3)
        ctx = finite_field.make_context(7, 3)
        worst = 0.0
        for _ in range(5):
            G = _random_monic(rng, 7, 4)
            if not polyring.is_power_free(G, 3):
                continue
            chi = characters.Character(ctx, G)
            newton = characters.traces_via_newton(characters.l_poly(chi), 4, 7)
            direct = [characters.trace_frobenius(chi, n) for n in range(1, 5)]
            worst = max(worst, max(abs(a - b) for a, b in zip(newton, direct)))
        return worst < 1e-8, f"max deviation {worst:.1e}"

    return [_run("char", "multiplicativity and reciprocity", laws), _run("char", "trace routes agree", routes)]


def suite_comb():
    def grid():
        failures = []
        for r in (2, 3, 4):
            for lam in partitions.partitions_up_to(8, 6):
                counts = partitions.brute_force_type_counts(lam, r)
                decs = partitions.decompositions(lam, r)
                if set(counts) - set(decs):
                    failures.append((str(lam), r, "type outside decompositions"))
                for a in decs:
                    if partitions.count_type(lam, a) != counts.get(a, 0):
                        failures.append((str(lam), r, str(a)))
                if partitions.limit_moment(lam, r) != partitions.limit_moment_subsets(lam, r):
                    failures.append((str(lam), r, "limit routes"))
        return not failures, f"failures {failures[:3]}"

    def four():
        lam = Partition.from_parts((1, 2, 2, 2, 2))
        a = partitions.DecompTuple.from_dict({(1, Partition.from_parts((1, 2))): 1,
                                              (2, Partition.from_parts((1, 1, 1))): 1}, 3)
        return partitions.count_type(lam, a) == 4 == partitions.brute_force_type_count(lam, a), "C = 4 instance"

    return [_run("comb", "type counts and limit routes", grid), _run("comb", "four set partitions", four),
            _run("comb", "r=2 symplectic bridge", _symplectic_bridge)]


def _symplectic_bridge():
    bad = [str(lam) for lam in partitions.partitions_up_to(8)
           if partitions.limit_moment(lam, 2) != rmt.symplectic_moment(lam)]
    return not bad, f"limit_moment(lambda, 2) = symplectic moment; failures {bad[:5]}"


def suite_rmt():
    def g_values():
        ok = rmt.g_moment(1, 1) == 0 and rmt.g_moment(1, 2) == 1 and rmt.g_moment(2, 1) == 1
        return ok, "g_1(1)=0, g_1(2)=1, g_2(1)=1"

    def identity():
        worst = 0.0
        rng = np.random.default_rng(5)
        for N in range(1, 9):
            x = rmt.haar_eigenvalues(N, 20, rng)
            for r in range(1, min(N, 5) + 1):
                lhs, rhs = rmt.elem_symmetric_identity_check(x, r)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst < 1e-9, f"max error {worst:.1e}"

    def reconstruction():
        ok = True
        for N, r in ((2, 2), (3, 2), (4, 3)):
            dev = rmt.weight_reconstruction_check(N, r, samples=20, seed=6).max_deviation
            ok &= dev[8] <= dev[4] + 1e-14
        return ok, "series deviation decays with truncation degree"

    def orthogonality():
        lam = Partition.from_parts((2,))
        est = rmt.mc_weighted_integral(5, lam, conj_mu=lam, samples=20_000, seed=7)
        return abs(est.value - 2) <= 4 * est.stderr, f"{est.value:.3f} +- {est.stderr:.3f} vs 2"

    return [_run("rmt", "g_j values", g_values), _run("rmt", "symplectic bridge", _symplectic_bridge),
            _run("rmt", "elementary symmetric identity", identity), _run("rmt", "weight reconstruction", reconstruction),
            _run("rmt", "z_lambda orthogonality", orthogonality)]


SUITES = {"field": suite_field, "poly": suite_poly, "char": suite_char, "comb": suite_comb, "rmt": suite_rmt}


def run_suites(name: str) -> list:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        out.extend(SUITES[n]())
    return out
