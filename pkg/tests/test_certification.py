import json
from fractions import Fraction

import numpy as np
import pytest

from flagcert.certification import (
    Budget,
    InvalidSeparator,
    ReducibleRepresentation,
    Separator,
    WrongDimension,
    build_certificate,
    check_admissible,
    check_chain,
    check_products,
    check_separator,
    check_thm_general_n,
    check_thm_n3,
    classify_n2_case,
    construct_separator,
    kappa_invariant,
    primitive_stability_verdict,
    replay_certificate,
    weakly_positive,
)
from flagcert.dynamics import NotLoxodromic, ProjTransform, fixed_flags, veronese_flag, veronese_transform
from flagcert.families import example_641, example_643, fuchsian_n2, trivial_rep
from flagcert.freegroup import GenSet, superbasis
from flagcert.linalg import Matrix
from flagcert.positivity import is_positive_tuple


def veronese_a():
    return ProjTransform(veronese_transform(Matrix([[4, 0], [0, 1]]), 3))


def veronese_separator(points=(Fraction(1, 2), 1, -1, Fraction(-1, 2))):
    return Separator(*(veronese_flag(x, 3) for x in points))


def trace2(a, b):
    a, b = np.array(a, float), np.array(b, float)
    c = a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
    return float(np.trace(c))


def test_check_separator_examples():
    fl = [veronese_flag(x, 3) for x in (0, 1, 2, 3)]
    assert check_separator(fl)
    assert check_separator(fl[::-1])
    assert not check_separator([fl[0], fl[1], fl[1], fl[3]])
    with pytest.raises(ValueError):
        check_separator(fl[:3])


def test_a_and_a_squared_admissible():
    a = veronese_a()
    rep = check_admissible([a, a @ a], veronese_separator())
    assert rep.verdict == "admissible"
    assert all(c.positive for c in rep.conditions)
    other = check_admissible([a, a @ a], veronese_separator((Fraction(-1, 2), -1, 1, Fraction(1, 2))))
    assert other.verdict == "admissible"


def test_inverse_pushes_domain_outside():
    a = veronese_a()
    rep = check_admissible([a.inverse()], veronese_separator())
    assert rep.verdict == "not-admissible"


def test_float_backend_never_admissible():
    a = veronese_a().to_float()
    rep = check_admissible([a], veronese_separator())
    assert rep.verdict in ("inconclusive", "not-admissible")


def test_invalid_separator_rejected():
    fl = [veronese_flag(x, 3) for x in (0, 2, 1, 3)]
    with pytest.raises(InvalidSeparator):
        check_admissible([veronese_a()], Separator(*fl))


def test_products_of_admissible_set():
    a = veronese_a()
    s = [a, a @ a]
    checks = check_products(s, veronese_separator(), 3)
    assert len(checks) == 2 + 4 + 8
    assert all(c.ok for c in checks)


def test_chain_of_admissible_set():
    a = veronese_a()
    ok, pattern = check_chain([a, a @ a], veronese_separator(), [0, 1, 1, 0])
    assert ok and len(pattern) == 4


def test_thm_general_n():
    rep = example_641(3, 2)
    assert check_thm_general_n(rep.a, rep.b).holds
    assert check_thm_general_n(example_643(2).a, example_643(2).b).holds
    assert not check_thm_general_n(rep.a, rep.a).holds
    rot = ProjTransform.of([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    ev = check_thm_general_n(rot, rep.b)
    assert not ev.holds and "not loxodromic" in ev.reason


def test_thm_n3():
    rep = example_643(2)
    assert check_thm_n3(rep.a, rep.b).holds
    assert not check_thm_n3(example_643(1).a, example_643(1).b).holds
    ap, am = fixed_flags(rep.a)
    bp, bm = fixed_flags(rep.b)
    # (b-, a-, b+, a+) is a rotation of the reversed quadruple, hence positive too
    assert is_positive_tuple([bm, am, bp, ap]).positive
    assert not is_positive_tuple([bm, ap, am, bp]).positive
    with pytest.raises(WrongDimension):
        check_thm_n3(fuchsian_n2().a, fuchsian_n2().b)


def test_construct_separator_for_643():
    rep = example_643(2)
    res = construct_separator(rep.a, rep.b)
    assert res.report.verdict == "admissible"
    assert check_admissible([rep.a, rep.b], res.separator).admissible


def test_construct_separator_fuchsian_intervals():
    rep = fuchsian_n2()
    res = construct_separator(rep.a, rep.b, strategies=["intervals"])
    assert res.strategy == "intervals" and res.report.admissible


def test_construct_separator_rejects_complex_spectrum():
    rot = ProjTransform.of([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    with pytest.raises(NotLoxodromic):
        construct_separator(rot, example_643(2).b)


def test_search_on_a_and_a_squared_is_inconclusive():
    from flagcert.certification import BudgetExhausted

    a = veronese_a()
    with pytest.raises(BudgetExhausted):
        construct_separator(a, a @ a, budget=Budget(random_samples=200))


def test_weakly_positive_641():
    rep = example_641(3, 2)
    r = GenSet.standard()
    assert weakly_positive(rep, r).weakly_positive
    assert weakly_positive(rep, superbasis(r)[0]).weakly_positive


def test_trivial_rep_refuted_weak_positivity():
    rep = trivial_rep(3)
    assert weakly_positive(rep, GenSet.standard()).status == "refuted"
    assert primitive_stability_verdict(rep).verdict == "inconclusive"


def test_primitive_stability_verdicts():
    v = primitive_stability_verdict(example_643(2))
    assert v.certified and v.route == "(R,R')"
    assert primitive_stability_verdict(example_641(4, 2)).certified


def test_kappa_invariant():
    a = Matrix([[2, 0], [0, Fraction(1, 2)]])
    assert kappa_invariant((a, a @ a)) == 2
    rep = fuchsian_n2()
    k = kappa_invariant(rep)
    assert k == Fraction(47, 64)
    assert abs(float(k) - trace2(rep.a.matrix.to_numpy(), rep.b.matrix.to_numpy())) < 1e-12
    # Nielsen moves (a, b) -> (ab, b), (a, b^-1), (b, a) keep the trace
    a, b = rep.a.matrix, rep.b.matrix
    for pair in [(a @ b, b), (a, b.inverse()), (b, a), (a, b @ a)]:
        assert kappa_invariant(pair) == k
    with pytest.raises(WrongDimension):
        kappa_invariant(example_643(2))


def test_classify_n2_cases():
    assert classify_n2_case(fuchsian_n2()) == 1
    a = Matrix([[2, 0], [0, Fraction(1, 2)]])
    b4 = Matrix([[2, 1], [-1, 0]])
    assert trace2(a.to_numpy(), b4.to_numpy()) > 2
    assert classify_n2_case((a, b4)) == 4
    b2 = Matrix([[1, 1], [1, 0]])  # det -1
    assert trace2(a.to_numpy(), b2.to_numpy()) > 2
    assert classify_n2_case((a, b2)) == 2
    with pytest.raises(ReducibleRepresentation):
        classify_n2_case((a, a))


def test_certificate_round_trip(tmp_path):
    rep = example_643(2)
    cert = build_certificate(rep, primitive_stability_verdict(rep))
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert))
    loaded = json.loads(path.read_text())
    assert replay_certificate(loaded).ok


def test_tampered_certificate_fails_replay():
    rep = example_643(2)
    cert = build_certificate(rep, primitive_stability_verdict(rep))
    cert["representation"]["b"][0][0] = "100"
    res = replay_certificate(cert)
    assert not res.ok and res.mismatches
