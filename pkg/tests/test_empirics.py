import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from flagcert.certification import construct_separator
from flagcert.dynamics import ProjTransform, cartan
from flagcert.empirics import (
    FitResult,
    csv_header,
    directed_anosov_probe,
    exhaustive_ray_gaps,
    fit_linear_lower,
    flat_boundedness_probe,
    flat_distances_along,
    gap_growth,
    growth_csv_string,
    nested_domain_probe,
    primitive_stability_probe,
    sampled_ray_gaps,
    svg_line_plot,
)
from flagcert.families import Representation, example_641, example_643, fuchsian_n2, reducible_rep, trivial_rep
from flagcert.freegroup import GenSet, primitive_ray, ray_from_choices, superbasis
from flagcert.linalg import Matrix

LOG2 = math.log(2)


def diag_rep():
    a = ProjTransform.of([[2, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 2)]])
    b = ProjTransform.of([[3, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 3)]])
    return Representation(a, b, "diagonal")


def mp_gaps(rep, word):
    """Oracle: product at 60 digits, singular values by mpmath."""
    mpmath.mp.dps = 60
    n = rep.n
    prod = mpmath.eye(n)
    out = []
    mats = {x: mpmath.matrix([[mpmath.mpf(v.numerator) / v.denominator for v in row] for row in rep.generator(x).matrix.rows]) for x in set(word)}
    dets = {x: abs(mpmath.det(m)) ** (mpmath.mpf(1) / n) for x, m in mats.items()}
    for i in range(len(word) + 1):
        if i:
            prod = prod * mats[word[i - 1]] / dets[word[i - 1]]
        s = sorted((mpmath.log(x) for x in mpmath.svd_r(prod, compute_uv=False)), reverse=True)
        out.append([float(s[k] - s[k + 1]) for k in range(n - 1)])
    return np.array(out)


def test_fit_examples():
    assert fit_linear_lower([2 * i for i in range(6)]) == FitResult(2.0, 0.0)
    assert fit_linear_lower([3.0] * 5) == FitResult(0.0, 0.0)
    assert fit_linear_lower([0, 3, 2, 6]) == FitResult(2.0, 2.0)
    with pytest.raises(ValueError):
        fit_linear_lower([1.0])


@given(st.lists(st.floats(-50, 50), min_size=2, max_size=30))
def test_fit_is_a_lower_bound(s):
    fit = fit_linear_lower(s)
    assert fit.kappa >= 0 and fit.kappa_prime >= 0
    assert fit.holds(s, tol=1e-9)


def test_trivial_rep_has_zero_gaps():
    g = gap_growth(trivial_rep(3), [1, 2, -1, 2, 2])
    assert np.all(g.gaps == 0)


def test_diagonal_powers_grow_linearly():
    g = gap_growth(diag_rep(), [1] * 10)
    for i, row in enumerate(g.gaps):
        assert np.allclose(row, [i * LOG2, i * LOG2], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("word", [[1, 2] * 10, [2, 2, -1, 2, 1, 1, -2, -2, 1, 2, 2, 1, 2, 2, 1, 1, 2, 1, 2, 2], [-1, -2] * 9])
def test_gaps_match_high_precision_product(word):
    rep = example_643(2)
    got = gap_growth(rep, word).gaps
    ref = mp_gaps(rep, word)
    assert np.allclose(got, ref, rtol=1e-9, atol=1e-9)


def test_gaps_match_high_precision_product_641():
    rep = example_641(4, 2)
    word = [1, 2, 2, 1, 2, 1, 1, 2, 2, 2, 1, 2]
    assert np.allclose(gap_growth(rep, word).gaps, mp_gaps(rep, word), rtol=1e-9, atol=1e-9)


def test_gap_growth_rejects_empty_length():
    with pytest.raises(ValueError):
        gap_growth(example_643(2), [1, 2], length=0)


def test_exhaustive_and_sampled_agree_bitwise():
    rep = example_643(2)
    for r in (GenSet.standard(), superbasis(GenSet.standard())[0].inverse()):
        length = 9
        ex = exhaustive_ray_gaps(rep, r, length)
        choices = np.array(list(itertools.product((0, 1), repeat=length)))
        assert np.array_equal(ex, sampled_ray_gaps(rep, r, choices))


def test_ray_object_and_letters_agree():
    rep = example_643(3)
    r = GenSet.standard()
    ray = ray_from_choices(r, [0, 1, 1, 0, 1])
    assert np.array_equal(gap_growth(rep, ray).gaps, gap_growth(rep, [1, 2, 2, 1, 2]).gaps)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=25))
def test_gaps_are_lipschitz_in_the_word(word):
    rep = example_643(2)
    gaps = gap_growth(rep, word).gaps
    bound = max(np.abs(cartan(rep.generator(x))).max() for x in (1, 2))
    assert np.all(np.abs(np.diff(gaps, axis=0)) <= 2 * bound + 1e-9)


def test_directed_probe_positive_for_643():
    rep = example_643(2)
    rep12 = directed_anosov_probe(rep, length=12)
    rep16 = directed_anosov_probe(rep, length=16)
    assert rep16.min_kappa > 0
    assert abs(rep12.min_kappa - rep16.min_kappa) <= 0.1 * rep16.min_kappa
    assert all(a.rays == 2**16 for a in rep16.alphabets)


def test_directed_probe_identity_generator():
    base = example_643(2)
    rep = Representation(ProjTransform(Matrix.identity(3)), base.b, "a-trivial")
    rep_out = directed_anosov_probe(rep, length=8)
    assert rep_out.min_kappa == 0
    assert set(rep_out.alphabets[0].worst_ray) == {"0"}


def test_directed_probe_sampled_is_deterministic():
    rep = example_643(2)
    a = directed_anosov_probe(rep, length=10, mode="sampled", samples=64, seed=3)
    b = directed_anosov_probe(rep, length=10, mode="sampled", samples=64, seed=3)
    assert a.to_json() == b.to_json()


def test_primitive_probe():
    rep = example_641(3, 2)
    rep_out = primitive_stability_probe(rep, k_max=2, l_max=2, length=16)
    assert rep_out.min_kappa > 0
    red = primitive_stability_probe(reducible_rep(), k_max=2, l_max=2, length=16)
    assert red.min_kappa == 0


def test_primitive_probe_single_ray_consistency():
    rep = reducible_rep()
    out = primitive_stability_probe(rep, k_max=1, l_max=1, length=12)
    worst = out.alphabets[0]
    from flagcert.freegroup import parse_word

    direct = gap_growth(rep, primitive_ray(parse_word(worst.worst_ray), 12))
    assert np.allclose(direct.gaps, worst.worst.gaps, rtol=1e-12, atol=1e-12)
    assert math.isclose(fit_linear_lower(direct).kappa, worst.min_kappa, abs_tol=1e-12)


def test_flat_distance_zero_for_diagonal_rep():
    rep = diag_rep()
    d = flat_distances_along(rep, GenSet.standard(), [0, 1, 1, 0, 1])
    assert np.all(d < 1e-6)


def test_flat_distances_invariant_under_conjugation():
    rep = example_643(2)
    h = Matrix([[2, 1, 0], [0, 1, 1], [1, 0, 3]])
    conj = Representation(
        ProjTransform(h @ rep.a.matrix @ h.inverse()), ProjTransform(h @ rep.b.matrix @ h.inverse()), "conj"
    )
    choices = [0, 1, 1, 0, 0, 1]
    d = flat_distances_along(rep, GenSet.standard(), choices)
    moved = flat_distances_along(conj, GenSet.standard(), choices, base=h.to_numpy())
    assert np.allclose(d, moved, atol=1e-5)


def test_flat_probe_small_run():
    out = flat_boundedness_probe(example_643(2), length=6, rays=4)
    assert np.isfinite(out.sup) and out.sup > 0
    assert set(out.to_json()) >= {"sup", "stabilized", "alphabets"}


def test_nested_probe_fuchsian():
    rep = fuchsian_n2()
    sep = construct_separator(rep.a, rep.b).separator
    out = nested_domain_probe(rep, GenSet.standard(), sep, depth=8, samples=4)
    assert out.exact and out.d_matches and out.ratios_ok and out.diameters_decreasing
    for seq, steps in zip(out.sequences, out.steps):
        if len(set(seq)) == 1:
            assert len({s.b_max for s in steps}) == 1


def test_nested_probe_depth_limit():
    rep = fuchsian_n2()
    sep = construct_separator(rep.a, rep.b).separator
    with pytest.raises(ValueError):
        nested_domain_probe(rep, GenSet.standard(), sep, depth=13)


def test_csv_output():
    rep = example_643(2)
    text = growth_csv_string(3, [gap_growth(rep, [1, 2, 2], alphabet="{a,b}")])
    lines = text.splitlines()
    assert lines[0].split(",") == csv_header(3) == ["alphabet", "ray", "i", "gap_min", "gap_k1", "gap_k2"]
    assert len(lines) == 5
    assert growth_csv_string(3, []) == ",".join(csv_header(3)) + "\n"


def test_svg_plot():
    svg = svg_line_plot([0, 1, 3, 2], title="kappa")
    assert svg.startswith("<svg") and "polyline" in svg and "kappa" in svg
    assert "<svg" in svg_line_plot([])
