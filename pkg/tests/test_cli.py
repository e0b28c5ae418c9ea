"""End-to-end command line runs (in-process) and the CSV helpers."""
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

import actinv.cli as cli
from actinv.io import read_columns_csv, write_columns_csv, write_zak_csv
from actinv.zak import BaseZakArray, FullZakArray, StackedZakArray

from conftest import random_function


def rotate(n):
    return [(i + 1) % n for i in range(n)]


def shear_cfg(**over):
    doc = {
        "schema": 1,
        "group": {"moduli": [6]},
        "base": {"generators": []},
        "extra": {"generators": [[3]]},
        "action": {"points": 6, "permutations": [rotate(6)]},
    }
    doc.update(over)
    return doc


def chain12_cfg(**over):
    doc = {
        "schema": 1,
        "group": {"moduli": [12]},
        "base": {"generators": [[4]]},
        "extra": {"generators": [[2]]},
        "action": {"points": 12, "permutations": [rotate(12)]},
    }
    doc.update(over)
    return doc


def write_cfg(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, argv):
    rc = cli.main(argv)
    out = capsys.readouterr().out
    return rc, out


# -- happy paths ---------------------------------------------------------------


def test_validate_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, chain12_cfg())
    rc, out = run(capsys, ["--config", cfg, "validate"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["command"] == "validate"
    assert doc["chain"]["index_base"] == 4
    assert doc["chain"]["index_extra"] == 2
    assert doc["action"]["orbit_count"] == 1
    assert all(v < 1e-10 for v in doc["self_test"].values())


def test_partition_command_golden(tmp_path, capsys):
    cfg = write_cfg(tmp_path, shear_cfg())
    rc, out = run(capsys, ["--config", cfg, "partition"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["blocks"] == [
        {"label": [0], "elements": [[0], [2], [4]]},
        {"label": [1], "elements": [[1], [3], [5]]},
    ]


def test_check_canonical_subspace(tmp_path, capsys):
    cfg = write_cfg(tmp_path, chain12_cfg(subspace={"canonical": True}))
    rc, out = run(capsys, ["--config", cfg, "check"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["subspace_dim"] == 3
    assert doc["extra_invariance"]["extra_invariant"] is True
    assert doc["extra_invariance"]["component_dims"] == [3, 0]
    assert doc["decomposability"]["decomposable"] is True


def test_check_random_subspace_deterministic(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path,
        chain12_cfg(
            subspace={"random": {"kind": "spanned", "count": 2}},
            options={"seed": 7},
        ),
    )
    rc1, out1 = run(capsys, ["--config", cfg, "check"])
    rc2, out2 = run(capsys, ["--config", cfg, "check"])
    assert rc1 == rc2 == 0
    assert out1 == out2  # byte-identical report for identical config and seed
    doc = json.loads(out1)
    assert doc["extra_invariance"]["extra_invariant"] is False


def test_check_generators_inline(tmp_path, capsys, bank):
    scn = bank["chain12"]
    f = random_function(scn, np.random.default_rng(3))
    vec = [[float(v.real), float(v.imag)] for v in f]
    cfg = write_cfg(tmp_path, chain12_cfg(subspace={"generators": [vec]}))
    rc, out = run(capsys, ["--config", cfg, "check"])
    assert rc == 0
    assert json.loads(out)["subspace_dim"] == 3


def test_approx_command_with_out_files(tmp_path, capsys):
    rng = np.random.default_rng(4)
    vecs = []
    for _ in range(3):
        f = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        vecs.append([[float(v.real), float(v.imag)] for v in f])
    cfg = write_cfg(
        tmp_path, chain12_cfg(data={"vectors": vecs}, options={"ell": 2})
    )
    out_path = tmp_path / "runs" / "report.json"
    rc, out = run(capsys, ["--config", cfg, "--out", str(out_path), "approx"])
    assert rc == 0
    assert out == ""  # report went to the file
    doc = json.loads(out_path.read_text())
    assert doc["ell"] == 2
    assert doc["n_vectors"] == 3
    assert doc["plain"]["error"] <= doc["extra"]["error"] + 1e-9
    for key, dims in (("plain", doc["plain"]["dim"]), ("extra", doc["extra"]["dim"])):
        frame_path = out_path.parent / doc["frames"][key]
        mat = read_columns_csv(frame_path)
        assert mat.shape == (12, dims)


def test_approx_data_from_csv(tmp_path, capsys):
    rng = np.random.default_rng(5)
    data = rng.standard_normal((12, 2)) + 1j * rng.standard_normal((12, 2))
    write_columns_csv(tmp_path / "data.csv", data)
    cfg = write_cfg(
        tmp_path, chain12_cfg(data={"csv": "data.csv"}, options={"ell": 1})
    )
    rc, out = run(capsys, ["--config", cfg, "approx"])
    assert rc == 0
    assert json.loads(out)["n_vectors"] == 2


def test_tol_flag_overrides_config(tmp_path, capsys):
    # an absurdly loose tolerance flips the verdict for a generic subspace
    cfg = write_cfg(
        tmp_path,
        chain12_cfg(subspace={"random": {"kind": "principal"}}, options={"tol": 1e-9}),
    )
    rc, out = run(capsys, ["--config", cfg, "--tol", "100.0", "check"])
    assert rc == 0
    assert json.loads(out)["extra_invariance"]["extra_invariant"] is True


# -- demos ---------------------------------------------------------------------


@pytest.mark.parametrize("name", ["shear", "dilation", "remark33"])
def test_demo_runs_clean(capsys, name):
    rc, out = run(capsys, ["demo", name])
    assert rc == 0
    doc = json.loads(out)
    assert doc["expected_ok"] is True
    assert doc["failures"] == []
    assert doc["extra_invariance"]["extra_invariant"] is True


def test_demo_deterministic_bytes(capsys):
    rc1, out1 = run(capsys, ["demo", "remark33"])
    rc2, out2 = run(capsys, ["demo", "remark33"])
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_demo_expectation_failure_exits_3(capsys, monkeypatch):
    broken = dict(cli.DEMO_EXPECTATIONS["shear"])
    broken["component_dims"] = [0, 1]
    monkeypatch.setitem(cli.DEMO_EXPECTATIONS, "shear", broken)
    rc, out = run(capsys, ["demo", "shear"])
    assert rc == 3
    doc = json.loads(out)
    assert doc["expected_ok"] is False
    assert any("component dimensions" in f for f in doc["failures"])


# -- configuration errors (exit 1) ---------------------------------------------


def error_detail(capsys, argv):
    rc, out = run(capsys, argv)
    doc = json.loads(out)
    return rc, doc["error"]["kind"], doc["error"]["detail"]


def test_missing_config_flag(capsys):
    rc, kind, detail = error_detail(capsys, ["check"])
    assert rc == 1 and kind == "config"
    assert "--config" in detail


def test_config_file_not_found(capsys, tmp_path):
    rc, kind, detail = error_detail(
        capsys, ["--config", str(tmp_path / "nope.json"), "validate"]
    )
    assert rc == 1 and kind == "config"
    assert "not found" in detail


def test_missing_group_section(capsys, tmp_path):
    cfg = write_cfg(tmp_path, {"schema": 1})
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "validate"])
    assert rc == 1 and kind == "config"
    assert detail == ".group: missing required field"


def test_wrong_schema_version(capsys, tmp_path):
    cfg = write_cfg(tmp_path, shear_cfg(schema=99))
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "validate"])
    assert rc == 1 and detail == "schema: expected schema version 1"


def test_bad_permutation(capsys, tmp_path):
    doc = chain12_cfg()
    doc["action"]["permutations"] = [[0] * 12]
    cfg = write_cfg(tmp_path, doc)
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "validate"])
    assert rc == 1
    assert detail == "action.permutations[0]: not a permutation of 0..11"


def test_check_needs_subspace(capsys, tmp_path):
    cfg = write_cfg(tmp_path, chain12_cfg())
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "check"])
    assert rc == 1 and "subspace" in detail


def test_approx_needs_data_and_ell(capsys, tmp_path):
    cfg = write_cfg(tmp_path, chain12_cfg())
    rc, _, detail = error_detail(capsys, ["--config", cfg, "approx"])
    assert rc == 1 and "data" in detail
    cfg = write_cfg(tmp_path, chain12_cfg(data={"vectors": [[[1.0, 0.0]] * 12]}))
    rc, _, detail = error_detail(capsys, ["--config", cfg, "approx"])
    assert rc == 1 and "options.ell" in detail


def test_bad_vector_arity(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        chain12_cfg(data={"vectors": [[[1.0, 0.0]] * 5]}, options={"ell": 1}),
    )
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "approx"])
    assert rc == 1 and "12" in detail


def test_missing_csv_file(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path, chain12_cfg(data={"csv": "absent.csv"}, options={"ell": 1})
    )
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "approx"])
    assert rc == 1 and kind == "config"


# -- validation failures (exit 2) ----------------------------------------------


def test_non_free_action_exits_2(capsys, tmp_path):
    doc = {
        "schema": 1,
        "group": {"moduli": [2]},
        "base": {"generators": []},
        "extra": {"generators": [[1]]},
        "action": {"points": 2, "permutations": [[0, 1]]},
    }
    cfg = write_cfg(tmp_path, doc)
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "validate"])
    assert rc == 2 and kind == "validation"
    assert "fixes point" in detail


def test_non_nested_chain_exits_2(capsys, tmp_path):
    doc = chain12_cfg()
    doc["base"] = {"generators": [[3]]}
    cfg = write_cfg(tmp_path, doc)
    rc, kind, detail = error_detail(capsys, ["--config", cfg, "validate"])
    assert rc == 2 and kind == "validation"


# -- CSV helpers ---------------------------------------------------------------


def test_columns_csv_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    mat = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    path = tmp_path / "mat.csv"
    write_columns_csv(path, mat)
    assert_allclose(read_columns_csv(path), mat, atol=1e-15)
    vec = mat[:, 0]
    write_columns_csv(path, vec)
    assert read_columns_csv(path).shape == (7, 1)


def test_columns_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x_re,x_im\n1,2\n")
    with pytest.raises(ValueError):
        read_columns_csv(p)
    p.write_text("c0_re,c0_im\n1\n")
    with pytest.raises(ValueError):
        read_columns_csv(p)
    p.write_text("c0_re,c0_im\n")
    with pytest.raises(ValueError):
        read_columns_csv(p)


def test_zak_csv_headers_and_shapes(tmp_path, bank):
    scn = bank["shear"]
    f = random_function(scn, np.random.default_rng(8))
    cases = [
        (BaseZakArray.transform(scn, f), "fiber0,tile,re,im", 6),
        (FullZakArray.transform(scn, f), "dual0,rep,re,im", 6),
        (StackedZakArray.transform(scn, f), "fiber0,slot,rep,re,im", 6),
    ]
    for arr, header, n_rows in cases:
        path = tmp_path / "zak.csv"
        write_zak_csv(path, arr)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == header
        assert len(lines) == 1 + n_rows
    with pytest.raises(TypeError):
        write_zak_csv(tmp_path / "zak.csv", np.zeros(6))


def test_zak_csv_product_group_headers(tmp_path, bank):
    scn = bank["product"]
    f = random_function(scn, np.random.default_rng(9))
    path = tmp_path / "zak.csv"
    write_zak_csv(path, FullZakArray.transform(scn, f))
    assert path.read_text().splitlines()[0] == "dual0,dual1,rep,re,im"
