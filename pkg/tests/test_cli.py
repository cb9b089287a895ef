from __future__ import annotations

import csv
import io
import logging
import shutil

import pytest

from elaunira.eticket.cli.bench import MIN_ITERS, PHASES, bench_sweeps, run_bench, write_csv
from elaunira.eticket.cli.demo import load_scenario, parse_scenario, run_demo
from elaunira.eticket.cli.main import main
from elaunira.eticket.config import Settings
from elaunira.eticket.exceptions import PolicyError

POLICIES = """
[[range]]
name = "age"
lower = 12
upper = 18

[[set]]
name = "region"
items = ["north", "south"]
"""

RIDER = """
[ranges]
age = 15

[sets]
region = "south"
"""


def scenario_text(age: int) -> str:
    return (
        POLICIES
        + f"""
[seller]
id = "kiosk"
validity = "2099-12-31"

[user]
id = "rider"
validity = "2099-12-31"

[user.ranges]
age = {age}

[user.sets]
region = "north"

[ticket]
service = "bus"
price = "1.20 EUR"
validity = "2099-06-30"
policies = ["age", "region"]

[verifier]
id = "gate"
"""
    )


@pytest.fixture
def settings():
    return Settings.resolve(backend="exponent-test", seed=7)


class TestDemo:
    def test_bundled_scenario(self, tmp_path, capsys):
        assert main(["demo", "--backend", "exponent-test", "--seed", "7", "--state-dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "revalidate: user refused a second show at gate-central" in out
        assert "deanonymize: double spender is rider-0001" in out

    def test_same_seed_same_trace(self, settings):
        scenario = load_scenario()
        first = run_demo(scenario, settings)
        second = run_demo(scenario, settings)
        assert first.digest == second.digest
        assert first.steps == second.steps
        other = run_demo(scenario, Settings.resolve(backend="exponent-test", seed=8))
        assert other.digest != first.digest

    def test_custom_scenario(self, tmp_path, settings):
        path = tmp_path / "scenario.toml"
        path.write_text(scenario_text(15))
        report = run_demo(load_scenario(path), settings)
        assert report.steps[-2] == "deanonymize: double spender is rider"

    def test_unsatisfied_policy_fails(self, tmp_path, capsys):
        path = tmp_path / "scenario.toml"
        path.write_text(scenario_text(30))
        code = main(["demo", "--backend", "exponent-test", "--seed", "7", "--config", str(path)])
        assert code == 1
        assert "ProverPreconditionFailed" in capsys.readouterr().err

    def test_toy_prime_too_small(self, capsys):
        assert main(["demo", "--backend", "exponent-test", "--test-prime", "101", "--seed", "1"]) == 1
        assert "RangeTooWide" in capsys.readouterr().err

    def test_incomplete_scenario(self):
        with pytest.raises(PolicyError, match="verifier"):
            parse_scenario({"seller": {}, "user": {}, "ticket": {}})


class TestBench:
    ARGS = ["--ranges", "1", "--sets", "1", "--k", "3", "--set-size", "2", "--iters", "1"]

    def test_csv(self, capsys, caplog):
        with caplog.at_level(logging.WARNING):
            code = main(["bench", "--backend", "exponent-test", "--seed", "3", *self.ARGS, "--no-sweeps"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["phase", "entity", "backend", "N1", "N2", "k", "set_size", "iters", "mean_ms"]
        assert [(r[0], r[1]) for r in rows[1:]] == list(PHASES)
        assert all(r[2:8] == ["exponent-test", "1", "1", "3", "2", "1"] for r in rows[1:])
        assert all(float(r[8]) >= 0 for r in rows[1:])
        assert "fewer than" in caplog.text

    def test_zero_iterations(self):
        with pytest.raises(SystemExit):
            main(["bench", "--iters", "0"])
        with pytest.raises(ValueError):
            run_bench(Settings.resolve(backend="exponent-test"), iters=0)

    def test_sweeps(self, settings):
        rows = bench_sweeps(settings, ks=(2, 3), set_sizes=(2, 4), k=3, iters=1)
        assert [(r.phase, r.k, r.set_size) for r in rows] == [
            ("range proof creation", 2, 0),
            ("range proof creation", 3, 0),
            ("set membership proof creation", 3, 2),
            ("set membership proof creation", 3, 4),
        ]

    @pytest.mark.slow
    def test_sweep_scaling(self, settings):
        best: dict[tuple[str, int, int], float] = {}
        for _ in range(3):
            for row in bench_sweeps(settings, ks=(5, 10, 20), set_sizes=(10, 100), k=5, iters=MIN_ITERS):
                key = (row.phase, row.k, row.set_size)
                best[key] = min(best.get(key, row.mean_ms), row.mean_ms)
        ranges = [best["range proof creation", k, 0] for k in (5, 10, 20)]
        assert ranges == sorted(ranges)
        assert 2.5 <= ranges[2] / ranges[0] <= 5.5
        sets = best["set membership proof creation", 5, 100] / best["set membership proof creation", 5, 10]
        assert 0.7 <= sets <= 1.4

    def test_output_file(self, tmp_path, settings):
        rows = run_bench(settings, n_ranges=1, n_sets=0, k=2, set_size=1, iters=1, sweeps=False)
        out = io.StringIO()
        write_csv(rows, out)
        assert len(out.getvalue().splitlines()) == len(PHASES) + 1
        path = tmp_path / "bench.csv"
        assert main(["bench", "--backend", "exponent-test", *self.ARGS, "--no-sweeps", "--out", str(path)]) == 0
        assert path.read_text().startswith("phase,entity")


class TestSubcommands:
    def test_full_flow(self, tmp_path, capsys):
        state = tmp_path / "state"
        policies = tmp_path / "policies.toml"
        policies.write_text(POLICIES)
        rider = tmp_path / "rider.toml"
        rider.write_text(RIDER)

        def run(*argv: str) -> int:
            return main([*argv, "--backend", "exponent-test", "--seed", "5", "--state-dir", str(state)])

        assert run("setup", "--policies", str(policies)) == 0
        assert run("register-seller", "--id", "kiosk") == 0
        assert run("register-user", "--id", "rider", "--attributes", str(rider)) == 0
        issue = ["--seller", "kiosk", "--user", "rider", "--service", "bus", "--price", "1.20 EUR"]
        assert run("issue", *issue, "--policies", "age,region", "--ticket-validity", "2099-06-30") == 0
        shutil.copy(state / "user-rider.state", state / "user-twin.state")

        assert run("validate", "--user", "rider", "--verifier", "gate") == 0
        assert run("validate", "--user", "rider", "--verifier", "gate") == 1
        assert "RepeatVerifier" in capsys.readouterr().err

        assert run("detect", "--verifier", "gate") == 0
        assert "No double spending found" in capsys.readouterr().out

        assert run("validate", "--user", "twin", "--verifier", "gate") == 0
        assert run("detect", "--verifier", "gate") == 0
        assert "gate: double spend by rider" in capsys.readouterr().out

    def test_missing_state(self, tmp_path, capsys):
        code = main(["register-seller", "--id", "kiosk", "--backend", "exponent-test", "--state-dir", str(tmp_path)])
        assert code == 1
        assert "eticket setup" in capsys.readouterr().err

    def test_unsatisfied_request(self, tmp_path, capsys):
        state = tmp_path / "state"
        policies = tmp_path / "policies.toml"
        policies.write_text(POLICIES)
        rider = tmp_path / "rider.toml"
        rider.write_text(RIDER.replace("age = 15", "age = 40"))

        def run(*argv: str) -> int:
            return main([*argv, "--backend", "exponent-test", "--seed", "5", "--state-dir", str(state)])

        run("setup", "--policies", str(policies))
        run("register-seller", "--id", "kiosk")
        run("register-user", "--id", "rider", "--attributes", str(rider))
        issue = ["--seller", "kiosk", "--user", "rider", "--service", "bus", "--price", "1.20 EUR"]
        assert run("issue", *issue, "--policies", "age", "--ticket-validity", "2099-06-30") == 1
        assert "ProverPreconditionFailed" in capsys.readouterr().err
        assert run("issue", *issue, "--policies", "region", "--ticket-validity", "2099-06-30") == 0
