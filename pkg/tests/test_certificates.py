import dataclasses

import pytest

from oracles import nonrepresentable
from twosq.arith import two_square_sums_mod
from twosq.certificates import (
    CaseRecord,
    Certificate,
    CertificateFormatError,
    FamilyStatement,
    HypothesisNotMet,
    RepresentationWitness,
    certify,
    dumps_certificate,
    enumerate_cases,
    lift_family,
    load_certificate,
    loads_certificate,
    save_certificate,
    spot_check_family,
    verify_certificate,
)

N0 = 1151121374334
FOOTNOTE_142 = [(142, 71), (141, 3), (140, 7), (138, 3), (134, 67), (126, 7), (110, 11), (78, 3), (14, 7)]


@pytest.fixture(scope="module")
def n0_cert():
    return certify(N0, 2)


def test_enumerate_small():
    assert enumerate_cases(1, 1) == [((), 1), ((0,), 0)]
    assert enumerate_cases(142, 1) == [((), 142)] + [((a,), 142 - 2**a) for a in range(8)]
    assert enumerate_cases(6, 2) == [((), 6), ((0,), 5), ((1,), 4), ((2,), 2),
                                     ((1, 0), 3), ((2, 0), 1), ((2, 1), 0)]
    with pytest.raises(ValueError):
        enumerate_cases(0, 1)


def _count_formula(n):
    singles = sum(1 for a in range(n.bit_length()) if 2**a <= n)
    pairs = sum(1 for a in range(n.bit_length()) for b in range(a) if 2**a + 2**b <= n)
    return 1 + singles + pairs


@pytest.mark.parametrize("n", [1, 2, 3, 7, 100, 535903, 2**40, N0, 2**63])
def test_case_count_formula(n):
    assert len(enumerate_cases(n, 2)) == _count_formula(n)


def test_n0_case_structure():
    cases = enumerate_cases(N0, 2)
    assert len(cases) == 858
    sizes = [len(e) for e, _ in cases]
    assert sizes.count(0) == 1 and sizes.count(1) == 41 and sizes.count(2) == 816
    assert 2**40 + 2**35 < N0 < 2**40 + 2**36


def test_n0_certificate(n0_cert):
    assert isinstance(n0_cert, Certificate)
    assert len(n0_cert.cases) == 858
    assert max(c.exponents for c in n0_cert.cases if len(c.exponents) == 1) == (40,)
    assert max(c.exponents for c in n0_cert.cases if len(c.exponents) == 2) == (40, 35)
    assert verify_certificate(n0_cert).diagnostic == "OK (858 cases)"


def test_142_chain():
    cert = certify(142, 1)
    assert [(c.remainder, c.obstruction[0]) for c in cert.cases] == FOOTNOTE_142
    assert verify_certificate(cert)


def test_witness_for_18():
    out = certify(18, 2)
    assert out == RepresentationWitness(18, 3, 3, ())


def test_535903():
    cert = certify(535903, 2)
    assert isinstance(cert, Certificate) and verify_certificate(cert)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_round_trip_and_exhaustiveness(k):
    limit = 10**4 + 1 if k < 3 else 3000
    brute = set(nonrepresentable(limit, k))
    for n in range(1, limit):
        out = certify(n, k)
        if isinstance(out, Certificate):
            assert n in brute
            assert verify_certificate(out), n
        else:
            assert n not in brute
            assert out.value() == n
            assert len(out.exponents) <= k
            assert list(out.exponents) == sorted(set(out.exponents), reverse=True)


def test_verify_missing_case(n0_cert):
    cert = certify(535903, 2)
    broken = dataclasses.replace(cert, cases=cert.cases[:5] + cert.cases[6:])
    v = verify_certificate(broken)
    assert not v and "missing case" in v.diagnostic


def _tamper(cert, i, **kw):
    cases = list(cert.cases)
    cases[i] = dataclasses.replace(cases[i], **kw)
    return dataclasses.replace(cert, cases=tuple(cases))


def test_verify_rejections():
    cert = certify(142, 1)
    p, e = cert.cases[2].obstruction
    checks = [
        (_tamper(cert, 2, obstruction=(p, 2)), "even exponent"),
        (_tamper(cert, 2, obstruction=(5, 1)), "not 3 mod 4"),
        (_tamper(cert, 2, obstruction=(11, 1)), "does not divide"),
        (_tamper(cert, 2, obstruction=(35, 1)), "not prime"),
        (_tamper(cert, 2, remainder=139), "remainder inconsistent"),
        (_tamper(cert, 2, exponents=(9,)), "unexpected case"),
        (_tamper(cert, 2, exponents=(0,)), "duplicate case"),
        (dataclasses.replace(cert, cases=cert.cases + (cert.cases[0],)), "duplicate case"),
    ]
    for bad, needle in checks:
        v = verify_certificate(bad)
        assert not v
        assert needle in v.diagnostic, (needle, v.diagnostic)
        assert v.diagnostic.startswith("case ")


def test_verify_catches_p_to_higher_power():
    # 126 = 2 * 3^2 * 7; claiming 3^1 divides it exactly is false
    cert = certify(142, 1)
    bad = _tamper(cert, 5, obstruction=(3, 1))
    assert "p^(e+1) divides" in verify_certificate(bad).diagnostic


def test_verify_forged_empty():
    v = verify_certificate(Certificate(36, 2, ()))
    assert not v and "missing case exps=-" in v.diagnostic


def test_lift_family(n0_cert):
    fam = lift_family(n0_cert)
    assert fam.rule == "mod18-tower"
    assert "2^alpha * 1151121374334" in fam.conclusion
    assert lift_family(certify(142, 1)).rule == "even-tower"
    assert lift_family(certify(3, 0)).rule == "doubling"
    with pytest.raises(HypothesisNotMet, match="18 does not divide"):
        lift_family(certify(535903, 2))
    with pytest.raises(HypothesisNotMet, match="2 does not divide"):
        lift_family(certify(23, 1))
    with pytest.raises(HypothesisNotMet, match="does not verify"):
        lift_family(Certificate(36, 2, ()))


def test_spot_check(n0_cert):
    assert spot_check_family(lift_family(n0_cert), [0, 1, 2])
    assert spot_check_family(lift_family(certify(142, 1)), range(11))
    forged = FamilyStatement(Certificate(36, 2, ()), "mod18-tower")
    check = spot_check_family(forged, [0])
    assert not check and check.results[0].startswith("representable")


def test_spot_check_range():
    fam = lift_family(certify(142, 1))
    check = spot_check_family(fam, [0, 60])
    assert not check and check.results[60] == "out of range"


def test_tower_lemma_congruences():
    sums4, sums9 = two_square_sums_mod(4), two_square_sums_mod(9)
    assert 6 not in sums9 and 3 not in sums4
    for n in range(18, 18 * 500, 18):
        assert (2 * n - 1) % 4 == 3 and (2 * n - 1) % 4 not in sums4
        for b in range(2, 12):
            assert (2 * n - 1 - 2**b) % 4 == 3
        assert (2 * n - 3) % 9 == 6


def test_even_tower_empirical():
    for n in range(2, 10**4 + 1, 2):
        if isinstance(certify(n, 1), Certificate):
            assert isinstance(certify(2 * n, 1), Certificate), n


def test_file_round_trip(tmp_path, n0_cert):
    path = tmp_path / "n0.cert"
    save_certificate(n0_cert, path)
    text = path.read_text()
    assert text.startswith("CERT v1\nN 1151121374334\nK 2\nCASE exps=- rem=1151121374334 p=")
    assert text.endswith("\nEND\n")
    assert load_certificate(path) == n0_cert


def test_format_lines():
    text = dumps_certificate(certify(142, 1))
    lines = text.splitlines()
    assert lines[3] == "CASE exps=- rem=142 p=71 e=1"
    assert lines[4] == "CASE exps=0 rem=141 p=3 e=1"
    assert len(lines) == 3 + 9 + 1


@pytest.mark.parametrize("text, needle", [
    ("CERT v2\nN 3\nK 0\nEND\n", "unsupported version"),
    ("CERT v1\nN 3\nK 0\nCASE exps=- rem=3 p=3 e=1\nEND\ngarbage\n", "trailing data"),
    ("CERT v1\nN 3\nK 0\nCASE exps=- rem=3 p=3 e=1\n", "missing END"),
    ("CERT v1\nN x\nK 0\nEND\n", "decimal"),
    ("CERT v1\nN 3\nK 0\nCASE exps=- rem=3 p=3\nEND\n", "malformed"),
    ("CERT v1\nN 3\nK 0\nCASE exps=- rem=3 q=3 e=1\nEND\n", "expected field 'p='"),
    ("HELLO\n", "missing 'CERT' header"),
])
def test_parser_rejects(text, needle):
    with pytest.raises(CertificateFormatError, match=needle):
        loads_certificate(text)


def test_parser_accepts_minimal():
    cert = loads_certificate("CERT v1\nN 3\nK 0\nCASE exps=- rem=3 p=3 e=1\nEND\n")
    assert cert == Certificate(3, 0, (CaseRecord((), 3, (3, 1)),))
    assert verify_certificate(cert)
