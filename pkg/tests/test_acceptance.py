"""Acceptance suite: one test per criterion, each reporting a single
PASS/FAIL line (collected in the terminal summary, or printed directly when
this file is run as a script)."""

import functools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np

from flagcert.certification import check_products, construct_separator
from flagcert.cli import main as cli_main
from flagcert.empirics import (
    directed_anosov_probe,
    flat_boundedness_probe,
    flat_objective_midpoint_gap,
    nested_domain_probe,
    primitive_stability_probe,
)
from flagcert.families import (
    commutator_643,
    commutator_rotation,
    discriminant_closed_form,
    example_641,
    example_643,
    fuchsian_n2,
    reducible_rep,
    triangle_641,
)
from flagcert.flags import A_indices_for_B, A_invariant, NotInQk, cross_ratio, labourie_B
from flagcert.freegroup import GenSet, superbasis
from flagcert.linalg import charpoly
from flagcert.positivity import is_positive_tuple, is_positive_tuple_fg

from gen import perturbed_tuple, positive_tuple, random_flag, random_invertible

RESULTS: dict[int, str] = {}

# Regression floor for criterion 7, from the first validated run
# (observed min kappa 0.4863 over 4 x 2^16 rays).
DIRECTED_KAPPA_FLOOR = 0.1


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except Exception as exc:
                RESULTS[number] = f"[{number:2d}] FAIL {title}: {type(exc).__name__}: {exc}"
                print(RESULTS[number])
                raise
            took = time.perf_counter() - start
            RESULTS[number] = f"[{number:2d}] PASS {title} ({took:.1f}s{', ' + detail if detail else ''})"
            print(RESULTS[number])

        return run

    return wrap


@criterion(1, "closed-form triangle invariant 1/(2t-3)")
def test_triangle_invariant_closed_form():
    start = time.perf_counter()
    count = 0
    for n in (3, 4, 5):
        for t in (Fraction(11, 10), Fraction(5, 4), Fraction(2), Fraction(3)):
            expected = 1 / (2 * t - 3)
            assert triangle_641(n, t) == expected
            approx = triangle_641(n, t, exact=False)
            assert math.isclose(approx, float(expected), rel_tol=1e-9)
            count += 1
    assert time.perf_counter() - start < 5
    return f"{count} cases"


@criterion(2, "commutator characteristic polynomial, discriminant and Niven verdict")
def test_commutator_analysis():
    start = time.perf_counter()
    ts = [Fraction(k, 3) for k in range(1, 61, 3)]
    assert len(ts) == 20
    for t in ts:
        c = (35 - 306 * t + 32 * t * t) / (128 * t)
        # (1 - x)(x^2 + c x + 1), low to high
        target = [1, c - 1, 1 - c, -1]
        p = charpoly(commutator_643(t).matrix)  # det(x I - M), monic
        assert [-x for x in p] == target
        assert commutator_rotation(t).discriminant == discriminant_closed_form(t)
    eps = Fraction(1, 10**9)
    for root in (Fraction(1, 16), Fraction(35, 2)):
        assert discriminant_closed_form(root) == 0
        assert discriminant_closed_form(root - eps) * discriminant_closed_form(root + eps) < 0
    grid = [Fraction(k, 64) for k in range(1, 64 * 24)]
    values = [discriminant_closed_form(t) for t in grid]
    assert [t for t, v in zip(grid, values) if v == 0] == [Fraction(1, 16), Fraction(35, 2)]
    # positive, then negative strictly between the roots, then positive
    for t, v in zip(grid, values):
        assert (v < 0) == (Fraction(1, 16) < t < Fraction(35, 2)) or v == 0
    r3 = commutator_rotation(3)
    assert r3.cos_theta == Fraction(595, 768) and r3.rational_angle is False
    assert time.perf_counter() - start < 5
    return "20 values of t"


@criterion(3, "decider equivalence on 500 random tuples")
def test_decider_equivalence():
    start = time.perf_counter()
    rng = random.Random(20261017)
    agree = positives = 0
    total = 500
    for i in range(total):
        n = rng.randint(2, 5)
        length = rng.randint(3, 6)
        fl = perturbed_tuple(rng, n, length) if i % 2 else positive_tuple(rng, n, length)
        a, b = is_positive_tuple(fl).positive, is_positive_tuple_fg(fl).positive
        assert a is not None and b is not None
        agree += a == b
        positives += bool(a)
    assert agree == total
    assert 0 < positives < total
    assert time.perf_counter() - start < 60
    return f"{positives} positive, {total - positives} not"


@criterion(4, "invariant identities on 200 instances each")
def test_invariant_identities():
    rng = random.Random(4)
    done = {"B>1": 0, "cocycle": 0, "product": 0, "symmetry": 0}
    while done["B>1"] < 200:
        n = rng.randint(2, 5)
        fl = positive_tuple(rng, n, 4)
        for k in range(1, n):
            assert labourie_B(*fl, k) > 1
        done["B>1"] += 1
    while done["cocycle"] < 200:
        n = rng.randint(2, 4)
        f = [random_flag(rng, n) for _ in range(5)]
        k = rng.randint(1, n - 1)
        try:
            lhs = labourie_B(f[0], f[1], f[2], f[3], k) * labourie_B(f[0], f[1], f[3], f[4], k)
            rhs = labourie_B(f[0], f[1], f[2], f[4], k)
        except NotInQk:
            continue
        assert lhs == rhs
        done["cocycle"] += 1
    while done["product"] < 200:
        n = rng.randint(2, 4)
        f = [random_flag(rng, n) for _ in range(4)]
        k = rng.randint(1, n - 1)
        try:
            b = labourie_B(*f, k)
            prod = Fraction(1)
            for j in A_indices_for_B(n, k):
                prod *= A_invariant(*f, j)
        except NotInQk:
            continue
        assert b == prod
        done["product"] += 1
    while done["symmetry"] < 200:
        n = rng.randint(2, 5)
        k = rng.randint(1, n - 1)
        m = [random_invertible(rng, n) for _ in range(4)]
        u1, u2 = m[0].first_columns(n - k), m[1].first_columns(n - k)
        w1, w2 = m[2].first_columns(k), m[3].first_columns(k)
        try:
            c = cross_ratio(u1, u2, w1, w2)
        except NotInQk:
            continue
        assert c == cross_ratio(u2, u1, w2, w1)
        assert c == cross_ratio(w1, w2, u1, u2)
        done["symmetry"] += 1
    return ", ".join(f"{k} {v}" for k, v in done.items()) + " (exact)"


@criterion(5, "products of length <= 6 of an admissible pair")
def test_positive_loxodromic_products():
    start = time.perf_counter()
    rep = example_643(2)
    found = construct_separator(rep.a, rep.b)
    assert found.report.admissible
    checks = check_products([rep.a, rep.b], found.separator, 6)
    assert len(checks) == 126
    assert all(c.ok for c in checks), [c.word for c in checks if not c.ok]
    assert time.perf_counter() - start < 60
    return "126 words"


@criterion(6, "certify end to end with replay")
def test_certification_end_to_end(tmp_path, capsys):
    cases = [
        (["--example", "641", "--n", "3", "--t", "2"], 0),
        (["--example", "641", "--n", "4", "--t", "2"], 0),
        (["--example", "643", "--t", "2"], 0),
        (["--example", "643", "--t", "3"], 0),
        (["--example", "fuchsian2"], 0),
        (["--example", "trivial", "--n", "3"], 2),
    ]
    for i, (args, expected) in enumerate(cases):
        path = tmp_path / f"cert{i}.json"
        assert cli_main(["certify", *args, "--out", str(path)]) == expected, args
        verdict = json.loads(path.read_text())["result"]["verdict"]
        replayed = cli_main(["certify", "--replay", str(path)])
        assert replayed == expected, (args, replayed)
        assert verdict == ("certified" if expected == 0 else "inconclusive")
    capsys.readouterr()
    return f"{len(cases)} representations"


@criterion(7, "directed-Anosov probe, 4 alphabets, exhaustive to length 16")
def test_directed_anosov_probe():
    start = time.perf_counter()
    rep = example_643(2).to_float()
    r = GenSet.standard()
    summaries = []
    for gens in (r, superbasis(r)[0]):
        summaries += directed_anosov_probe(rep, gens, length=16, mode="exhaustive", threads=4).alphabets
    assert len(summaries) == 4
    assert all(s.rays == 2**16 for s in summaries)
    floor = min(float(s.kappas.min()) for s in summaries)
    assert floor >= DIRECTED_KAPPA_FLOOR
    took = time.perf_counter() - start
    assert took < 120
    return f"min kappa {floor:.4f}"


@criterion(8, "primitive probe and reducible negative control")
def test_primitive_probe():
    out = primitive_stability_probe(example_641(3, 2), k_max=4, l_max=3, length=24)
    assert out.min_kappa > 0
    control = primitive_stability_probe(reducible_rep(), k_max=4, l_max=3, length=24)
    assert control.min_kappa == 0
    return f"min kappa {out.min_kappa:.4f} over {out.alphabets[0].rays} rays; control worst ray {control.alphabets[0].worst_ray}"


@criterion(9, "contraction of nested domains in dimension 2")
def test_contraction_suite():
    rep = fuchsian_n2()
    sep = construct_separator(rep.a, rep.b).separator
    out = nested_domain_probe(rep, GenSet.standard(), sep, depth=12)
    assert out.exact
    assert out.d_matches
    for steps in out.steps:
        for s in steps:
            assert s.ratio <= s.bound + 1e-9
            assert s.within_bound
    assert out.diameters_decreasing
    return f"D = {out.observed_d:.4f}, {len(out.sequences)} sequences"


@criterion(10, "flat-boundedness and optimizer convexity")
def test_flat_boundedness():
    out = flat_boundedness_probe(example_643(2).to_float(), length=12, rays=32)
    assert math.isfinite(out.sup)
    for a in out.alphabets:
        assert a.tail_half_sup <= 1.1 * a.first_half_sup
    rng = np.random.default_rng(10)
    worst = -np.inf
    for _ in range(500):
        n = int(rng.integers(2, 6))
        p = rng.standard_normal((n, n))
        x, y = rng.standard_normal(n) * 2, rng.standard_normal(n) * 2
        worst = max(worst, flat_objective_midpoint_gap(p, x - x.mean(), y - y.mean()))
    assert worst <= 1e-8
    return f"sup {out.sup:.4f}"


if __name__ == "__main__":
    import sys

    import pytest

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
