import hashlib
import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from e6dirac.fixtures import (
    FULLY_SUPPORTED_KGB,
    Affine,
    FailureFixture,
    FixtureError,
    dump_branch,
    dump_failure,
    dump_integral,
    dump_involutions,
    dump_scattered,
    dump_tempered,
    fixture_dir,
    load_branch,
    load_failure,
    load_involutions,
    parse_branch,
    parse_failure,
    parse_integral,
    parse_involutions,
    parse_scattered,
    parse_tempered,
    parse_tempered_line,
    sample_parameters,
    verify_failure_case,
    verify_integral_table,
    verify_scattered_table,
    verify_tempered_rows,
)
from e6dirac.omega import conjecture_check
from e6dirac.root_datum import is_ktype_weight
from e6dirac.weyl import simple_reflection


def test_fully_supported_list():
    assert len(FULLY_SUPPORTED_KGB) == 170
    assert min(FULLY_SUPPORTED_KGB) == 266 and max(FULLY_SUPPORTED_KGB) == 512


def test_manifest_checksums(fixture_path):
    lines = (fixture_path / "SHA256SUMS").read_text().split("\n")
    entries = [ln.split("  ") for ln in lines if ln]
    assert {name for _, name in entries} == {p.name for p in fixture_path.iterdir() if p.name != "SHA256SUMS"}
    for digest, name in entries:
        assert hashlib.sha256((fixture_path / name).read_bytes()).hexdigest() == digest, name


def test_fixture_dir_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("E6_FIXTURE_DIR", str(tmp_path))
    assert fixture_dir() == tmp_path
    assert fixture_dir("elsewhere").name == "elsewhere"
    monkeypatch.delenv("E6_FIXTURE_DIR")
    assert (fixture_dir() / "scattered.tsv").exists()


# ---------------------------------------------------------------- involutions

def test_involution_round_trip(involutions):
    again = parse_involutions(json.loads(dump_involutions(involutions)))
    assert again == involutions


def test_empty_involution_file(tmp_path):
    p = tmp_path / "kgb.json"
    p.write_text("[]")
    with pytest.raises(FixtureError, match="no involutions"):
        load_involutions(p)


def test_involution_load_names_bad_record(involutions):
    data = json.loads(dump_involutions(involutions[:3]))
    bad = simple_reflection(1) * simple_reflection(3)
    data[2]["matrix"] = bad.to_json()
    with pytest.raises(FixtureError, match=r"record 2 \(x=%d\).*theta\^2" % data[2]["kgb_index"]):
        parse_involutions(data)
    data = json.loads(dump_involutions(involutions[:2]))
    data[1]["kgb_index"] = data[0]["kgb_index"]
    with pytest.raises(FixtureError, match="duplicate"):
        parse_involutions(data)
    with pytest.raises(FixtureError, match="record 0"):
        parse_involutions([{"matrix": []}])


# ---------------------------------------------------------------- tables

def test_table_sizes(tables):
    assert len(tables.scattered) == 31
    assert len({r.x for r in tables.scattered}) == 31
    assert len(tables.integral) == 32
    assert len({r.infchar for r in tables.integral}) == 12
    assert [r.x for r in tables.tempered] == list(range(27))


def test_table_round_trips(tables):
    assert parse_scattered(dump_scattered(tables.scattered)) == tables.scattered
    assert parse_integral(dump_integral(tables.integral)) == tables.integral
    assert parse_tempered(dump_tempered(tables.tempered)) == tables.tempered


def test_scattered_parse_errors():
    header = "x\tlambda\tnu\tinfchar\tspin_lkts\n"
    with pytest.raises(FixtureError, match="expected columns"):
        parse_scattered("x\tlambda\n")
    with pytest.raises(FixtureError, match="not fully supported"):
        parse_scattered(header + "12\t1,1,1,1,1,1\t0,0,0,0,0,0\t1,1,1,1,1,1\t[0,0,0,0,0,0]\n")
    with pytest.raises(FixtureError, match="no spin-lowest"):
        parse_scattered(header + "512\t1,1,1,1,1,1\t0,0,0,0,0,0\t1,1,1,1,1,1\t\n")
    with pytest.raises(FixtureError, match="line 2"):
        parse_scattered(header + "512\t1,1,1\t0,0,0,0,0,0\t1,1,1,1,1,1\t[0,0,0,0,0,0]\n")


def test_conjecture_audit_over_tables(tables):
    for row in list(tables.scattered) + list(tables.integral):
        assert conjecture_check(row.infchar), row.x


def test_integral_norms_below_rho_c(tables):
    for row in tables.integral:
        from e6dirac.root_datum import zeta_norm_sq

        assert zeta_norm_sq(row.infchar) < 30


# ---------------------------------------------------------------- tempered DSL

def test_affine_parse_and_print():
    e = Affine.parse("a+2c+e-f+3")
    assert e.coeffs == (1, 0, 2, 0, 1, -1) and e.const == 3
    assert str(e) == "a+2c+e-f+3"
    assert str(Affine.parse("-2a-3b-15")) == "-2a-3b-15"
    assert str(Affine.parse("0")) == "0"
    for bad in ["", "a b", "2x", "a+"]:
        with pytest.raises(FixtureError):
            Affine.parse(bad)


@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6), st.integers(-30, 30))
def test_affine_round_trip(coeffs, const):
    e = Affine(tuple(coeffs), const)
    assert Affine.parse(str(e)) == e


def test_tempered_row_zero():
    row = parse_tempered_line("0 | e+f, a-1, c+d, b-1, d+e, a+2c+e-f+3 | a>=1, b>=1, c+d>=1, d+e>=1, e+f>=1")
    p = np.ones((1, 6), dtype=np.int64)
    assert row.mu(p).tolist() == [[2, 0, 2, 0, 2, 6]]
    assert row.satisfied(p).all()
    assert not row.satisfied(np.array([[0, 1, 1, 1, 1, 1]])).any()


def test_tempered_disjunctions(tables):
    rows = {r.x: r for r in tables.tempered}
    assert len(rows[17].alternatives) == 2 and len(rows[21].alternatives) == 2
    r = rows[17]
    # second alternative only: d = 0 with a, b, c, e, f >= 1
    assert r.satisfied(np.array([[1, 1, 1, 0, 1, 1]])).all()
    assert not r.satisfied(np.array([[1, 0, 1, 0, 1, 1]])).any()
    assert r.satisfied(np.array([[1, 0, 1, 1, 0, 1]])).all()


def test_tempered_parse_errors():
    with pytest.raises(FixtureError):
        parse_tempered("3 | a, b | a>=1")
    with pytest.raises(FixtureError, match="cannot parse condition"):
        parse_tempered("3 | a, b, c, d, e, f | a>1")
    with pytest.raises(FixtureError, match="line 2"):
        parse_tempered("# comment\n3 | a, b, c, d, e, f\n")


def test_sample_parameters(tables):
    row = tables.tempered[0]
    a = sample_parameters(row, 200, seed=1)
    assert len(a) == 200 and len({tuple(p) for p in a.tolist()}) == 200
    assert row.satisfied(a).all()
    assert ((a >= 0) & (a <= 6)).all()
    assert (sample_parameters(row, 200, seed=1) == a).all()
    assert not (sample_parameters(row, 200, seed=2) == a).all()


def test_tempered_rows_all_k_types(tables):
    for row in tables.tempered:
        p = sample_parameters(row, 50, seed=3)
        assert all(is_ktype_weight(m) for m in row.mu(p).tolist()), row.x


def test_unsatisfiable_row_is_flagged():
    row = parse_tempered_line("5 | a, b, c, d, e, f | a>=7")
    rep = verify_tempered_rows([row], 10, 0)
    assert rep.ok and rep.counts() == {"skip": 1} and rep.warnings


# ---------------------------------------------------------------- verification

def test_verify_scattered_rows(tables, thetas):
    rows = {r.x: r for r in tables.scattered}
    rep = verify_scattered_table([rows[512], rows[496]], thetas)
    assert rep.ok and rep.counts() == {"pass": 10}
    assert rows[512].spin_lkts == ((0, 0, 0, 0, 0, 0),)
    assert rows[496].infchar == (1, 1, 1, 0, 1, 1)


def test_verify_scattered_corrupted_row(tables, thetas):
    row = replace(tables.scattered[-1], spin_lkts=((0, 0, 0, 0, 0, 1),))
    assert not is_ktype_weight((0, 0, 0, 0, 0, 1))
    rep = verify_scattered_table([row], thetas)
    failed = {c.check for c in rep.failures()}
    assert "c:spin=Lambda" in failed and not rep.ok


def test_verify_scattered_wrong_nu(tables, thetas):
    row = tables.scattered[0]
    bad = replace(row, nu=tuple(x + 1 for x in row.nu))
    rep = verify_scattered_table([bad], thetas)
    assert {c.check for c in rep.failures()} == {"a:nu", "b:infchar"}


def test_verify_scattered_missing_theta_is_a_gap(tables):
    rep = verify_scattered_table(tables.scattered[:1], {})
    statuses = {c.check: c.status for c in rep.results}
    assert statuses["a:nu"] == statuses["b:infchar"] == "gap"
    assert statuses["c:spin=Lambda"] == "pass"


def test_verify_integral(tables, thetas):
    rep = verify_integral_table(tables.integral, thetas)
    assert rep.ok and rep.counts() == {"pass": 4 * 32}


def test_verify_tempered_deterministic(tables):
    a = verify_tempered_rows(tables.tempered[:3], 30, seed=4)
    b = verify_tempered_rows(tables.tempered[:3], 30, seed=4)
    assert a.ok and a.to_json() == b.to_json()


def test_tempered_examples_all_ones(tables):
    rows = {r.x: r for r in tables.tempered}
    from e6dirac.norms import lambda_stats, spin_norm
    from e6dirac.root_datum import zeta_norm_sq

    ones = np.ones((1, 6), dtype=np.int64)
    for x in (0, 26):
        assert rows[x].satisfied(ones).all()
        mu = tuple(rows[x].mu(ones)[0].tolist())
        assert spin_norm(mu).norm_sq == zeta_norm_sq((1,) * 6) == lambda_stats(mu).norm_sq


def test_failure_case(fixture_path):
    f = load_failure(fixture_path / "failure_0011117.json")
    assert f.infchar == (0, 0, 1, 1, 1, 7) and len(f.lkts) == 14
    rep = verify_failure_case(f)
    assert rep.ok and rep.counts() == {"pass": 14} and not rep.warnings
    assert parse_failure(json.loads(dump_failure(f))) == f


def test_failure_case_edge_cases():
    rep = verify_failure_case(FailureFixture((0, 0, 1, 1, 1, 7), ()))
    assert rep.ok and rep.warnings
    rep = verify_failure_case(FailureFixture((1, 1, 1, 0, 1, 1), ((0, 0, 0, 0, 1, -18),)))
    assert not rep.ok and any("equality" in w for w in rep.warnings)
    with pytest.raises(FixtureError):
        FailureFixture((0,) * 6, ((0, 0, 0, 0, 0, 1),))


def test_branch_round_trip(fixture_path):
    b = load_branch(fixture_path / "branch_ex62.json")
    assert parse_branch(json.loads(dump_branch(b))) == b
    with pytest.raises(FixtureError):
        parse_branch({"ktypes": [[[0, 0, 0, 0, 0, 1], 1]]})
    with pytest.raises(FixtureError):
        parse_branch({})


def test_failure_fixture_conversion_record(fixture_path):
    data = json.loads((fixture_path / "failure_0011117.json").read_text())
    assert len(data["atlas_highest_weight"]) == 14 == len(data["lkts"])
    assert data["conversion_candidates"] > 0
