import json
import math

import pytest

from divergences.extended_convex import ExtendedConvexFunction
from main import build_parser, main

SPACE = ["a", "b"]


@pytest.fixture
def pair_files(write_json):
    mu = write_json("mu.json", {"space": SPACE, "weights": [0.5, 0.5]})
    nu = write_json("nu.json", {"space": SPACE, "weights": [0.25, 0.75]})
    return mu, nu


@pytest.fixture
def identity_files(write_json):
    system = write_json("system.json", {"space": SPACE, "map": [0, 1], "weights": [math.e, math.e**2]})
    mu = write_json("half.json", {"space": SPACE, "weights": [0.5, 0.5]})
    return system, mu


def structured(capsys, argv, **kwargs):
    code = main(argv + ["--output", "structured"], **kwargs)
    return code, json.loads(capsys.readouterr().out)


class TestParser:
    def test_flags_default_to_none(self):
        args = vars(build_parser().parse_args(["verify"]))
        assert args["seed"] is None
        assert args["report"] is None
        assert args["suite"] is None

    def test_generator_flag(self):
        args = build_parser().parse_args(["divergence", "--f", "alpha:2", "--mu", "m", "--nu", "n"])
        assert args.generator == "alpha:2"


class TestDivergence:
    def test_plain_value(self, pair_files, capsys):
        mu, nu = pair_files
        assert main(["divergence", "--mu", mu, "--nu", nu]) == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(0.143841, abs=1e-6)

    def test_total_variation(self, pair_files, capsys):
        mu, nu = pair_files
        code, document = structured(capsys, ["divergence", "--f", "total_variation", "--mu", mu, "--nu", nu])
        assert code == 0
        assert document["result"]["value"] == pytest.approx(0.5)

    def test_full_report(self, pair_files, capsys):
        mu, nu = pair_files
        code, document = structured(capsys, ["divergence", "--mu", mu, "--nu", nu, "--report"])
        assert code == 0
        report = document["result"]["report"]
        assert report["sing_plus_term"] == 0.0
        assert report["ac_term"] == pytest.approx(0.143841, abs=1e-6)

    def test_infinite_value(self, write_json, capsys):
        mu = write_json("mu.json", {"space": SPACE, "weights": [1.0, 0.0]})
        nu = write_json("nu.json", {"space": SPACE, "weights": [0.0, 1.0]})
        assert main(["divergence", "--mu", mu, "--nu", nu]) == 0
        assert capsys.readouterr().out.strip() == "+inf"

    def test_signed_nu_with_kl(self, pair_files, write_json, capsys):
        mu, _ = pair_files
        nu = write_json("signed.json", {"space": SPACE, "weights": [0.5, -0.5]})
        assert main(["divergence", "--mu", mu, "--nu", nu]) == 1
        assert "positive measures" in capsys.readouterr().err

    def test_signed_nu_with_total_variation(self, pair_files, write_json, capsys):
        mu, _ = pair_files
        nu = write_json("signed.json", {"space": SPACE, "weights": [0.5, -0.5]})
        assert main(["divergence", "--f", "total_variation", "--mu", mu, "--nu", nu]) == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(1.0)

    def test_negative_mu(self, pair_files, write_json, capsys):
        _, nu = pair_files
        mu = write_json("signed.json", {"space": SPACE, "weights": [0.5, -0.5]})
        assert main(["divergence", "--mu", mu, "--nu", nu]) == 1

    def test_space_mismatch(self, pair_files, write_json, capsys):
        mu, _ = pair_files
        nu = write_json("other.json", {"space": ["x", "y"], "weights": [0.5, 0.5]})
        assert main(["divergence", "--mu", mu, "--nu", nu]) == 1

    def test_unknown_generator(self, pair_files, capsys):
        mu, nu = pair_files
        assert main(["divergence", "--f", "renyi", "--mu", mu, "--nu", nu]) == 1


class TestOtherSubcommands:
    def test_decompose(self, write_json, capsys):
        mu = write_json("mu.json", {"space": ["x", "y", "z"], "weights": [1.0, 0.0, 2.0]})
        nu = write_json("nu.json", {"space": ["x", "y", "z"], "weights": [3.0, -1.0, -2.0]})
        code, document = structured(capsys, ["decompose", "--mu", mu, "--nu", nu])
        assert code == 0
        assert document["result"]["lebesgue"] == {
            "nu_a": [3.0, 0.0, -2.0],
            "nu_s_plus": [0.0, 0.0, 0.0],
            "nu_s_minus": [0.0, -1.0, 0.0],
        }
        assert document["result"]["density"] == [3.0, 0.0, -1.0]

    def test_supsums(self, pair_files, capsys):
        mu, nu = pair_files
        code, document = structured(capsys, ["supsums", "--mu", mu, "--nu", nu, "--samples", "50", "--seed", "4"])
        assert code == 0
        result = document["result"]
        assert result["atomic_sum"] == pytest.approx(result["closed_form"])
        assert result["best_sampled_sum"] <= result["closed_form"] + 1e-9
        assert result["estimate"] <= result["closed_form"] + 1e-9

    def test_supsums_without_samples(self, pair_files, capsys):
        mu, nu = pair_files
        code, document = structured(capsys, ["supsums", "--mu", mu, "--nu", nu, "--samples", "0"])
        assert code == 0
        assert document["result"]["best_sampled_sum"] is None

    def test_tentropy(self, identity_files, capsys):
        system, mu = identity_files
        code, document = structured(capsys, ["tentropy", "--system", system, "--mu", mu, "--n-max", "4"])
        assert code == 0
        result = document["result"]
        assert result["tau"] == pytest.approx(1.5)
        assert result["tau_n"] == pytest.approx([1.5, 3.0, 4.5, 6.0])
        assert result["tau_n_partition_definition"] == pytest.approx([1.5, 3.0, 4.5], abs=1e-6)
        assert result["constant_rate"] is True

    def test_tentropy_requires_invariance(self, write_json, capsys):
        system = write_json("cycle.json", {"space": SPACE, "map": [1, 0], "weights": [1.0, 1.0]})
        mu = write_json("point.json", {"space": SPACE, "weights": [1.0, 0.0]})
        assert main(["tentropy", "--system", system, "--mu", mu]) == 1
        assert "not invariant" in capsys.readouterr().err

    def test_tentropy_tolerance_flag(self, write_json, capsys):
        system = write_json("cycle.json", {"space": ["a", "b", "c"], "map": [1, 2, 0], "weights": [1.0, 2.0, 4.0]})
        mu = write_json("near.json", {"space": ["a", "b", "c"], "weights": [0.333333, 0.333333, 0.333334]})
        assert main(["tentropy", "--system", system, "--mu", mu]) == 1
        assert "not invariant" in capsys.readouterr().err
        code, document = structured(capsys, ["tentropy", "--system", system, "--mu", mu, "--tol", "1e-5"])
        assert code == 0
        assert document["result"]["tau"] == pytest.approx(math.log(8.0) / 3.0, abs=1e-5)

    @pytest.mark.parametrize("weight", [1e-12, 1e12])
    def test_tentropy_extreme_weights(self, write_json, capsys, weight):
        system = write_json("point.json", {"space": ["a"], "map": [0], "weights": [weight]})
        mu = write_json("dirac.json", {"space": ["a"], "weights": [1.0]})
        code, document = structured(capsys, ["tentropy", "--system", system, "--mu", mu])
        assert code == 0
        assert document["result"]["tau"] == pytest.approx(math.log(weight), rel=1e-12)
        assert document["result"]["tau_n"][-1] == pytest.approx(32 * math.log(weight), rel=1e-12)

    def test_variational(self, write_json, capsys):
        system = write_json("cycle.json", {"space": SPACE, "map": [1, 0], "weights": [2.0, 8.0]})
        code, document = structured(capsys, ["variational", "--system", system])
        assert code == 0
        assert document["result"]["lambda"] == pytest.approx(math.log(4.0))
        assert document["result"]["gap"] <= 1e-9

    def test_variational_with_potential_file(self, identity_files, write_json, capsys):
        system, _ = identity_files
        phi = write_json("phi.json", {"space": SPACE, "phi": [1.0, 0.0]})
        code, document = structured(capsys, ["variational", "--system", system, "--phi", phi])
        assert code == 0
        assert document["result"]["best"] == pytest.approx(2.0)

    def test_iteration_budget_exhausted(self, identity_files, write_json, capsys):
        system, _ = identity_files
        mu = write_json("skewed.json", {"space": SPACE, "weights": [0.25, 0.75]})
        assert main(["tentropy", "--system", system, "--mu", mu, "--iters", "1"]) == 2
        assert "did not converge" in capsys.readouterr().err


class TestVerify:
    def test_zero_trials(self, capsys):
        assert main(["verify", "--trials", "0"]) == 0
        assert "suite" in capsys.readouterr().out

    def test_single_suite(self, capsys):
        code, document = structured(capsys, ["verify", "adjoint", "--trials", "2"])
        assert code == 0
        assert [suite["suite"] for suite in document["result"]["suites"]] == ["adjoint"]

    def test_unknown_suite(self, capsys):
        assert main(["verify", "nosuch", "--trials", "1"]) == 1

    def test_default_suites_at_scale(self, capsys):
        code, document = structured(capsys, ["verify", "--trials", "500", "--seed", "7"])
        assert code == 0
        assert all(suite["passed"] for suite in document["result"]["suites"])

    def test_violation_exit_code(self, capsys):
        lying = ExtendedConvexFunction(lambda t: (t - 1.0) ** 2, "lying", slope_pos=1.0, slope_neg=-1.0, support_line=(0.0, 0.0))
        assert main(["verify", "slopes", "--trials", "1", "--seed", "9"], generators=[lying]) == 3
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "replay: divkit verify slopes --seed 9 --index 0" in out


class TestInvocation:
    def test_structured_output_is_deterministic(self, pair_files, capsys):
        mu, nu = pair_files
        argv = ["supsums", "--mu", mu, "--nu", nu, "--samples", "20", "--seed", "1", "--output", "structured"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_record_writes_ledger(self, pair_files, tmp_path, capsys):
        mu, nu = pair_files
        ledger = tmp_path / "runs" / "ledger.json"
        assert main(["divergence", "--mu", mu, "--nu", nu, "--record", str(ledger)]) == 0
        document = json.loads(ledger.read_text(encoding="utf-8"))
        assert document["entries"][0]["step"] == "divergence"
        assert document["entries"][0]["exit_code"] == 0

    def test_missing_file(self, tmp_path, capsys):
        assert main(["divergence", "--mu", str(tmp_path / "absent.json"), "--nu", str(tmp_path / "absent.json")]) == 1

    def test_missing_flag(self, capsys):
        assert main(["divergence"]) == 1
        assert "requires --mu, --nu" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert main(["divergence", "--bogus"]) == 1

    def test_missing_subcommand(self, capsys):
        assert main([]) == 1

    def test_environment_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("DIVKIT_SEED", "5")
        code, document = structured(capsys, ["verify", "adjoint", "--trials", "1"])
        assert code == 0
        assert document["result"]["seed"] == 5
