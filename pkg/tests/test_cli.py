import json
import subprocess
import sys

import numpy as np
import pytest

from mcmc_se.cc import METHODS
from mcmc_se.cli import build_parser, dumps, main

from conftest import var_chain


@pytest.fixture
def chain_files(tmp_path):
    paths = []
    for m in range(2):
        p = tmp_path / f"chain{m}.csv"
        np.savetxt(p, var_chain(1200, 3, seed=m).samples, delimiter=",", header="a,b,c", comments="")
        paths.append(str(p))
    return paths


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_single_method(chain_files, capsys):
    code, out, _ = run(["estimate", "--method", "cc-ise", "--input", chain_files[0]], capsys)
    assert code == 0
    res = json.loads(out)["cc-ise"]
    assert res["dim"] == 3 and len(res["sigma"]) == 9
    assert res["ess"] > 0 and res["ess_per_n"] == pytest.approx(res["ess"] / 1200)


def test_estimate_mise_and_cc(chain_files, capsys):
    code, out, _ = run(["estimate", "--method", "mise", "--method", "cc-ise", "--input", chain_files[0]], capsys)
    res = json.loads(out)
    assert code == 0 and set(res) == {"mise", "cc-ise"}
    assert "t_n" in res["mise"]["diagnostics"]


def test_estimate_floats_round_trip(chain_files, tmp_path, capsys):
    out = tmp_path / "est.json"
    assert main(["estimate", "--method", "bm", "--input", chain_files[0], "--out", str(out)]) == 0
    from mcmc_se import batch_means_cov, load_chain

    expect = batch_means_cov(load_chain(chain_files[0], has_header=True)).reshape(-1)
    got = np.array(json.loads(out.read_text())["bm"]["sigma"])
    assert np.array_equal(got, expect)


def test_estimate_parallel_methods(chain_files, capsys):
    argv = ["estimate", "--methods", "gcc-ise,stan-cc,gbm"]
    for p in chain_files:
        argv += ["--input", p]
    code, out, _ = run(argv, capsys)
    assert code == 0 and set(json.loads(out)) == {"gcc-ise", "stan-cc", "gbm"}


def test_estimate_gcc_single_input_allowed(chain_files, capsys):
    assert run(["estimate", "--method", "gcc-ise", "--input", chain_files[0]], capsys)[0] == 0


@pytest.mark.parametrize("method", ["stan-cc", "gbm"])
def test_parallel_only_single_input_is_usage_error(chain_files, capsys, method):
    code, _, err = run(["estimate", "--method", method, "--input", chain_files[0]], capsys)
    assert code == 2 and ">= 2 chains" in err


def test_exit_codes(tmp_path, capsys):
    assert run(["estimate", "--input", str(tmp_path / "missing.csv")], capsys)[0] == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    code, _, err = run(["estimate", "--input", str(bad)], capsys)
    assert code == 3 and "bad.csv" in err
    const = tmp_path / "const.csv"
    np.savetxt(const, np.column_stack([np.arange(100.0) % 7, np.ones(100)]), delimiter=",")
    code, _, err = run(["estimate", "--method", "cc-ise", "--input", str(const)], capsys)
    assert code == 4 and "coordinate 1" in err
    assert run(["estimate", "--method", "nope", "--input", str(const)], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["estimate", "--bogus"])
    assert info.value.code == 2


def test_benchmark_deterministic(tmp_path, capsys):
    argv = ["benchmark", "--d", "4", "--rho", "1.1", "--n", "500,1000", "--reps", "3", "--methods", "bm,cc-ise", "--seed", "7"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()
    assert a.read_text().splitlines()[0].startswith("method,n,rep,")


def test_benchmark_slow_guard(capsys):
    code, _, err = run(["benchmark", "--methods", "mise", "--n", "500000"], capsys)
    assert code == 2 and "--allow-slow" in err


def test_benchmark_stan_needs_chains(capsys):
    assert run(["benchmark", "--methods", "stan-cc", "--n", "100", "--reps", "1"], capsys)[0] == 2


def test_bias_command(tmp_path, capsys):
    argv = ["bias", "--d", "4", "--rho", "inf,1.1", "--n", "2000", "--reps", "4", "--seed", "3"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rho,cov_rel_bias,corr_rel_bias,cov_rel_det,corr_rel_det"
    iid = [float(v) for v in lines[1].split(",")]
    assert abs(iid[1]) < 0.1 and abs(iid[2]) < 0.1
    assert run(argv, capsys)[1] == out


def test_help_lists_every_method():
    text = build_parser()._subparsers._group_actions[0].choices["estimate"].format_help()
    flat = " ".join(text.split())
    for tag in METHODS:
        assert tag in flat


def test_dumps_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert json.loads(dumps({"a": [1.5, 2], "b": True})) == {"a": [1.5, 2], "b": True}


def test_module_entry_point(chain_files):
    proc = subprocess.run(
        [sys.executable, "-m", "mcmc_se", "estimate", "--input", chain_files[0]], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "cc-ise" in json.loads(proc.stdout)
