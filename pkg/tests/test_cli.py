"""
命令行入口测试
"""

import json

import pytest

from tests.conftest import CHSH_QUANTUM
from xorduel.core.errors import NonConvergenceError
from xorduel.main import main
from xorduel.schemas.result_schemas import DualPairReport
from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.duality_service import DualityService
from xorduel.services.quantum_solver_service import QuantumSolverService

FAST = ["--restarts", "4", "--workers", "1"]


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _error(stderr: str) -> dict:
    line = [ln for ln in stderr.splitlines() if ln.startswith('{"error"')][-1]
    return json.loads(line)["error"]


@pytest.mark.integration
class TestSolve:
    def test_classical_chsh(self, capsys):
        code, out, _ = _run(capsys, ["solve", "chsh", "--model", "classical"])
        assert code == 0
        data = json.loads(out)
        assert data["result"]["value"] == 0.75
        assert data["mode"] == "classical:xor"
        assert data["expected"]["classical_xor"]["value"] == 0.75
        assert data["within_tolerance"] is True
        assert data["timestamp"] == "1970-01-01T00:00:00+00:00"
        assert data["result"]["elapsed_ms"] == 0

    def test_quantum_chsh(self, capsys):
        code, out, _ = _run(capsys, ["solve", "chsh", "--restarts", "16", "--workers", "1"])
        assert code == 0
        data = json.loads(out)
        assert data["result"]["value"] == pytest.approx(CHSH_QUANTUM, abs=1e-4)
        assert data["result"]["strategy"]["type"] == "q_xor"

    def test_output_is_byte_identical(self, capsys):
        _, first, _ = _run(capsys, ["solve", "chsh", *FAST])
        _, second, _ = _run(capsys, ["solve", "chsh", *FAST])
        assert first == second

    def test_table_matches_json(self, capsys):
        _, out_json, _ = _run(capsys, ["solve", "qrac21", "--model", "classical"])
        _, out_table, _ = _run(capsys, ["solve", "qrac21", "--model", "classical", "--format", "table"])
        value = json.loads(out_json)["result"]["value"]
        assert repr(value) in out_table

    def test_other_side_of_catalog_pair(self, capsys):
        code, out, _ = _run(capsys, ["solve", "chsh", "--kind", "xor_star", "--model", "classical"])
        assert code == 0
        data = json.loads(out)
        assert data["game"]["name"] == "CHSH*"
        assert data["mode"] == "classical:xorstar_reversible"

    def test_classical_with_reset(self, capsys):
        code, out, _ = _run(capsys, ["solve", "ra", "--model", "classical", "--allow-reset"])
        assert code == 0
        data = json.loads(out)
        assert data["result"]["value"] == 14 / 16
        assert "classical_xorstar_irr" in data["expected"]

    def test_game_file(self, capsys, tmp_path, chsh_dict):
        path = tmp_path / "chsh.json"
        path.write_text(json.dumps(chsh_dict), encoding="utf-8")
        code, out, _ = _run(capsys, ["solve", str(path), "--model", "classical"])
        assert code == 0
        data = json.loads(out)
        assert data["result"]["value"] == 0.75
        assert "expected" not in data

    @pytest.mark.parametrize("s_card,t_card", [(1, 25), (25, 1)])
    def test_lopsided_game_file(self, capsys, tmp_path, s_card, t_card):
        game = {
            "name": "lopsided",
            "kind": "xor",
            "s_card": s_card,
            "t_card": t_card,
            "dist": [[1.0 / 25] * t_card for _ in range(s_card)],
            "task": [[(s + t) % 2 for t in range(t_card)] for s in range(s_card)],
        }
        path = tmp_path / "lopsided.json"
        path.write_text(json.dumps(game), encoding="utf-8")
        code, out, _ = _run(capsys, ["solve", str(path), "--model", "classical"])
        assert code == 0
        assert json.loads(out)["result"]["value"] == pytest.approx(1.0, abs=1e-12)

    def test_seesaw(self, capsys):
        code, out, _ = _run(capsys, ["solve", "chsh", "--method", "seesaw", *FAST])
        assert code == 0
        data = json.loads(out)
        assert data["mode"] == "quantum:seesaw"
        assert data["result"]["strategy"]["type"] == "vector"

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        path = tmp_path / "result.json"
        _, out, _ = _run(capsys, ["solve", "chsh", "--model", "classical", "--out", str(path)])
        assert path.read_text(encoding="utf-8") == out


@pytest.mark.integration
class TestUsageErrors:
    def test_reset_on_xor_game(self, capsys):
        code, _, err = _run(capsys, ["solve", "chsh", "--allow-reset", *FAST])
        assert code == 2
        assert _error(err)["code"] == "INCOMPATIBLE_MODE"

    def test_seesaw_on_xorstar(self, capsys):
        code, _, _ = _run(capsys, ["solve", "ra", "--method", "seesaw", *FAST])
        assert code == 2

    def test_even_odd_cycle(self, capsys):
        code, _, _ = _run(capsys, ["dual", "odd_cycle", "--n", "4", *FAST])
        assert code == 2

    def test_unknown_key(self, capsys):
        code, _, err = _run(capsys, ["solve", "nosuchgame"])
        assert code == 2
        assert _error(err)["details"]["key"] == "nosuchgame"

    def test_unwritable_output(self, capsys, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        code, _, _ = _run(capsys, ["solve", "chsh", "--model", "classical", "--out", str(blocker / "r.json")])
        assert code == 2

    @pytest.mark.parametrize(
        "argv,option",
        [
            (["solve", "chsh", "--restarts", "0"], "restarts"),
            (["solve", "chsh", "--seed", "-1"], "seed"),
            (["solve", "chsh", "--seed", str(2**64)], "seed"),
            (["solve", "chsh", "--method", "seesaw", "--dim", "0"], "seesaw_dim"),
            (["dual", "chsh", "--restarts", "-3"], "restarts"),
            (["activation", "ra", "--seed", "-5"], "seed"),
        ],
    )
    def test_out_of_range_optimizer_option(self, capsys, argv, option):
        code, _, err = _run(capsys, argv)
        assert code == 2
        error = _error(err)
        assert error["code"] == "INVALID_PARAM"
        assert error["details"]["options"] == [option]

    def test_missing_subcommand(self, capsys):
        code, _, _ = _run(capsys, [])
        assert code == 2

    def test_version(self, capsys):
        code, out, _ = _run(capsys, ["--version"])
        assert code == 0
        assert "xorduel" in out


@pytest.mark.integration
class TestExitCodes:
    def test_non_convergence(self, capsys, mocker):
        mocker.patch.object(
            QuantumSolverService, "quantum_value", side_effect=NonConvergenceError("stuck")
        )
        code, _, err = _run(capsys, ["solve", "chsh", *FAST])
        assert code == 3
        assert _error(err)["code"] == "NON_CONVERGENCE"

    def test_internal_error(self, capsys, mocker):
        mocker.patch.object(ClassicalSolverService, "classical_value", side_effect=RuntimeError("boom"))
        code, _, err = _run(capsys, ["solve", "chsh", "--model", "classical"])
        assert code == 1
        assert _error(err)["code"] == "INTERNAL_ERROR"

    def test_failing_dual_report(self, capsys, mocker):
        report = DualPairReport(
            game_name="CHSH",
            omega_c_xor=0.75,
            omega_q_xor=0.85,
            omega_c_xorstar_rev=0.75,
            omega_q_xorstar_rev=0.80,
            gap_xor=0.10,
            gap_xorstar=0.05,
            classical_discrepancy=0.0,
            quantum_discrepancy=0.05,
            max_abs_discrepancy=0.05,
            passed=False,
        )
        mocker.patch.object(DualityService, "compare_dual_pair", return_value=report)
        code, out, _ = _run(capsys, ["dual", "chsh", *FAST])
        assert code == 4
        assert json.loads(out)["result"]["passed"] is False


@pytest.mark.integration
class TestDual:
    def test_chsh_pair(self, capsys):
        code, out, _ = _run(capsys, ["dual", "chsh", "--restarts", "16", "--workers", "1"])
        assert code == 0
        data = json.loads(out)
        assert data["result"]["report_type"] == "dual"
        assert data["result"]["passed"] is True
        assert data["within_tolerance"] is True

    def test_two_files(self, capsys, tmp_path, chsh_dict):
        xor_path = tmp_path / "xor.json"
        star_path = tmp_path / "star.yaml"
        xor_path.write_text(json.dumps(chsh_dict), encoding="utf-8")
        star_path.write_text(json.dumps({**chsh_dict, "kind": "xor_star", "name": "CHSH*"}), encoding="utf-8")
        code, out, _ = _run(capsys, ["dual", str(star_path), str(xor_path), "--restarts", "16", "--workers", "1"])
        assert code == 0
        assert json.loads(out)["game"]["kind"] == "xor"

    def test_table_format(self, capsys):
        code, out, _ = _run(capsys, ["dual", "chsh", "--format", "table", "--restarts", "16", "--workers", "1"])
        assert code == 0
        assert "PASS" in out


@pytest.mark.integration
class TestCatalogCommand:
    def test_json(self, capsys):
        code, out, _ = _run(capsys, ["catalog"])
        assert code == 0
        keys = [e["key"] for e in json.loads(out)["entries"]]
        assert keys == ["chsh", "odd_cycle", "eaos", "qrac21", "bit_torpedo", "gbha_i3", "ra"]

    def test_table(self, capsys):
        code, out, _ = _run(capsys, ["catalog", "--format", "table"])
        assert code == 0
        assert "bit_torpedo" in out

    @pytest.mark.parametrize("key", ["chsh", "eaos", "qrac21", "bit_torpedo", "gbha_i3", "ra"])
    def test_every_key_is_accepted(self, capsys, key):
        code, _, _ = _run(capsys, ["solve", key, "--model", "classical"])
        assert code == 0


@pytest.mark.integration
class TestMapStrategy:
    def _write(self, tmp_path, data) -> str:
        path = tmp_path / "strategy.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    def test_xor_to_xorstar(self, capsys, tmp_path):
        source = self._write(
            tmp_path,
            {
                "type": "q_xor",
                "alice": [{"theta": 0.0, "phi": 0.0}, {"theta": 1.5707963267948966, "phi": 0.0}],
                "bob": [{"theta": 0.7853981633974483, "phi": 0.0}, {"theta": 0.7853981633974483, "phi": 3.141592653589793}],
            },
        )
        out_path = tmp_path / "mapped.json"
        code, out, _ = _run(
            capsys, ["map-strategy", source, "--to", "xorstar", "--game", "chsh", "--out", str(out_path)]
        )
        assert code == 0
        data = json.loads(out)
        assert data["source_win"] == pytest.approx(CHSH_QUANTUM, abs=1e-12)
        assert data["abs_difference"] < 1e-10
        assert data["strategy"]["type"] == "q_xorstar"
        assert json.loads(out_path.read_text(encoding="utf-8")) == data["strategy"]

    def test_reset_cannot_map_to_xor(self, capsys, tmp_path):
        identity = {"theta": 0.0, "phi": 0.0, "lam": 0.0}
        source = self._write(
            tmp_path,
            {
                "type": "q_xorstar",
                "alice": [identity] * 4,
                "bob": [{**identity, "reset": True}] + [{**identity, "reset": False}] * 3,
            },
        )
        code, _, err = _run(capsys, ["map-strategy", source, "--to", "xor", "--game", "ra"])
        assert code == 2
        assert _error(err)["code"] == "REVERSIBILITY_VIOLATION"

    def test_wrong_strategy_type(self, capsys, tmp_path):
        source = self._write(tmp_path, {"type": "det_xor", "a": [0, 0], "b": [0, 0]})
        code, _, _ = _run(capsys, ["map-strategy", source, "--to", "xor", "--game", "chsh"])
        assert code == 2
