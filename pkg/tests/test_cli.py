import json

import pytest
from click.testing import CliRunner

from main import cli

F3 = {"p": 3, "deg": 1, "modulus": [0, 1]}


def write_element(path, terms, n=2, field=F3):
    path.write_text(json.dumps({"field": field, "n": n, "terms": terms}), encoding="utf-8")
    return str(path)


def json_lines(output):
    return [json.loads(line) for line in output.splitlines() if line.startswith("{")]


@pytest.fixture
def runner():
    return CliRunner()


class TestBracket:
    def test_text_output(self, runner, tmp_path):
        x = write_element(tmp_path / "x.json", [{"alpha": [0, 0], "d": 1, "c": [1]}])
        y = write_element(tmp_path / "y.json", [{"alpha": [1, 0], "d": 2, "c": [1]}])
        result = runner.invoke(cli, ['--deg', '1', 'bracket', x, y])
        assert result.exit_code == 0
        assert result.output.strip() == "D2"

    def test_machine_output(self, runner, tmp_path):
        x = write_element(tmp_path / "x.json", [{"alpha": [0, 0], "d": 1, "c": [1]}])
        y = write_element(tmp_path / "y.json", [{"alpha": [1, 0], "d": 2, "c": [1]}])
        result = runner.invoke(cli, ['--deg', '1', '--format', 'machine', 'bracket', x, y])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["terms"] == [{"alpha": [0, 0], "d": 2, "c": [1]}]

    def test_malformed_element(self, runner, tmp_path):
        x = write_element(tmp_path / "x.json", [{"alpha": [0, 0], "d": 1, "c": [0]}])
        result = runner.invoke(cli, ['--deg', '1', 'bracket', x, x])
        assert result.exit_code == 2

    def test_invalid_utf8_file(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_bytes(b'\xff\xfe{"terms": [\x80]}')
        result = runner.invoke(cli, ['--deg', '1', 'bracket', str(bad), str(bad)])
        assert result.exit_code == 2

    def test_float_exponents_rejected(self, runner, tmp_path):
        x = write_element(tmp_path / "x.json", [{"alpha": [0.9, 0], "d": 1.7, "c": [1]}])
        result = runner.invoke(cli, ['--deg', '1', 'bracket', x, x])
        assert result.exit_code == 2

    def test_non_prime_characteristic(self, runner, tmp_path):
        x = write_element(tmp_path / "x.json", [])
        result = runner.invoke(cli, ['--p', '4', 'bracket', x, x])
        assert result.exit_code == 2


class TestVerify:
    def test_counterexample(self, runner):
        result = runner.invoke(cli, ['--format', 'machine', 'verify', 'counterexample'])
        assert result.exit_code == 0
        (report,) = json_lines(result.output)
        assert report["check"] == "counterexample"
        assert report["status"] == "pass"
        assert report["dims"]["derivations"] == 4

    def test_excluded_configuration_is_infeasible(self, runner):
        result = runner.invoke(cli, ['--n', '1', '--p', '2', '--format', 'machine',
                                     'verify', 'torus-cartan'])
        assert result.exit_code == 3
        (report,) = json_lines(result.output)
        assert report["status"] == "infeasible"
        assert report["reason"]

    def test_unknown_check(self, runner):
        result = runner.invoke(cli, ['verify', 'bogus'])
        assert result.exit_code == 2

    def test_bad_field_parameters(self, runner):
        result = runner.invoke(cli, ['--p', '4', 'verify', 'der-inn'])
        assert result.exit_code == 2

    def test_text_mode(self, runner):
        result = runner.invoke(cli, ['--n', '1', '--p', '3', 'verify', 'der-inn'])
        assert result.exit_code == 0
        assert "der-inn" in result.output
        assert "PASS" in result.output

    def test_rank_three_characteristic_two(self, runner):
        checks = ['der-inn', 'script-d', 'centralizers', 'torus-cartan', 'determining-pair']
        result = runner.invoke(cli, ['--n', '3', '--p', '2', '--format', 'machine', 'verify'] + checks)
        assert result.exit_code == 0
        reports = json_lines(result.output)
        assert [r["check"] for r in reports] == checks
        assert all(r["status"] == "pass" for r in reports)
        assert reports[0]["dims"]["der"] == 24

    def test_machine_output_is_reproducible(self, runner):
        args = ['--n', '1', '--p', '3', '--format', 'machine', 'verify',
                'der-inn', 'determining-pair']
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0
        assert first.output == second.output
        assert [r["check"] for r in json_lines(first.output)] == ['der-inn', 'determining-pair']


class TestDerivationsAndRecover:
    def test_derivations(self, runner):
        result = runner.invoke(cli, ['--n', '1', '--p', '3', '--format', 'machine', 'derivations'])
        assert result.exit_code == 0
        (report,) = json_lines(result.output)
        assert report["dims"] == {"der": 3, "inn": 3, "equal": True}

    def test_recover_zero(self, runner, tmp_path):
        zero = write_element(tmp_path / "zero.json", [], n=1)
        result = runner.invoke(cli, ['--n', '1', '--p', '3', '--format', 'machine',
                                     'recover', zero, zero])
        assert result.exit_code == 0
        (report,) = json_lines(result.output)
        assert report["witness"]["a"]["terms"] == []

    def test_recover_unsolvable(self, runner, tmp_path):
        v1 = write_element(tmp_path / "v1.json", [{"alpha": [1], "d": 1, "c": [1]}], n=1)
        v2 = write_element(tmp_path / "v2.json", [], n=1)
        result = runner.invoke(cli, ['--n', '1', '--p', '3', '--format', 'machine',
                                     'recover', v1, v2])
        assert result.exit_code == 1
        (report,) = json_lines(result.output)
        assert report["dims"] == {"solvable": False}


class TestCentralizer:
    def test_script_d(self, runner):
        result = runner.invoke(cli, ['--n', '1', '--p', '3', '--format', 'machine',
                                     'centralizer', '--special', 'script_D'])
        assert result.exit_code == 0
        (report,) = json_lines(result.output)
        assert report["dims"] == {"dim": 1, "subalgebra": True}

    def test_char_two_refusal(self, runner):
        result = runner.invoke(cli, ['--n', '2', '--p', '2', '--format', 'machine',
                                     'centralizer', '--special', 'hh_k', '--index', '2'])
        assert result.exit_code == 3

    def test_missing_element(self, runner):
        result = runner.invoke(cli, ['centralizer'])
        assert result.exit_code == 2


class TestTwoLocal:
    def test_default_fixture(self, runner):
        result = runner.invoke(cli, ['--format', 'machine', 'twolocal-check'])
        assert result.exit_code == 0
        local, derivation = json_lines(result.output)
        assert local["status"] == "pass"
        assert derivation["status"] == "fail"
        assert derivation["witness"]["property"] == "additivity"

    def test_partial_map(self, runner, tmp_path):
        d = {"field": F3, "n": 1, "terms": [{"alpha": [0], "d": 1, "c": [1]}]}
        x2_d = {"field": F3, "n": 1, "terms": [{"alpha": [2], "d": 1, "c": [1]}]}
        doc = {"config": {"n": 1, "p": 3, "deg": 1, "modulus": [0, 1]},
               "pairs": [{"x": d, "fx": x2_d}]}
        path = tmp_path / "map.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        result = runner.invoke(cli, ['--format', 'machine', 'twolocal-check', str(path)])
        assert result.exit_code == 1
        local, derivation = json_lines(result.output)
        assert local["status"] == "fail"
        assert derivation["status"] == "infeasible"
