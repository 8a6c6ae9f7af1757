import json
import subprocess
import sys

import pytest

from cxgroups.cli import FIXTURE_NAMES, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def fixture(tmp_path, capsys, name):
    code, out = run(capsys, "fixture", name)
    assert code == 0
    path = tmp_path / f"{name}.json"
    path.write_text(out)
    return path


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_every_fixture_validates(tmp_path, capsys, name):
    path = fixture(tmp_path, capsys, name)
    code, out = run(capsys, "validate", path)
    rep = json.loads(out)
    if name in ("segment", "triangle"):
        assert code == 0 and rep["kind"] == "scwol"
    assert rep["valid"] is (code == 0)


def test_validate_reports_inversion(tmp_path, capsys):
    seg = fixture(tmp_path, capsys, "segment")
    code, out = run(capsys, "aut", seg)
    assert code == 0 and json.loads(out)["acts_without_inversions"] is False


def test_quotient_and_covolume(tmp_path, capsys):
    flip = fixture(tmp_path, capsys, "flip")
    code, out = run(capsys, "quotient", flip)
    data = json.loads(out)
    assert code == 0 and data["valid"]
    assert len(data["quotient"]["vertices"]) == 3
    code, out = run(capsys, "covolume", flip)
    assert json.loads(out) == {"covolume": "5/2"}


def test_quotient_round_trips_through_files(tmp_path, capsys):
    act = fixture(tmp_path, capsys, "tripod_s3")
    code, out = run(capsys, "quotient", act)
    data = json.loads(out)
    cpath = tmp_path / "cog.json"
    cpath.write_text(json.dumps(data["complex"]))
    chpath = tmp_path / "choices.json"
    chpath.write_text(json.dumps(data["choices"]))
    code, out2 = run(capsys, "quotient", act, "--choices", chpath)
    assert code == 0 and json.loads(out2)["complex"] == data["complex"]
    code, out = run(capsys, "validate", cpath)
    assert code == 0 and json.loads(out)["kind"] == "complex"
    code, out = run(capsys, "pi1", "--complex", cpath, "--order", "--abelianization")
    res = json.loads(out)
    assert res["order"] == 6
    assert res["abelianization"]["invariants"] == [2]
    code, out = run(capsys, "develop", cpath)
    res = json.loads(out)
    assert not res["partial"] and res["vertices"] == 7


def test_develop_with_morphism_and_partial(tmp_path, capsys):
    m = fixture(tmp_path, capsys, "d3_segment_to_s3")
    d3 = fixture(tmp_path, capsys, "d3_segment")
    code, out = run(capsys, "develop", d3, "--morphism", m)
    res = json.loads(out)
    assert code == 0 and (res["vertices"], res["edges"]) == (12, 12)
    assert res["simply_connected"] == "No"
    code, out = run(capsys, "develop", d3, "--budget", 300)
    res = json.loads(out)
    assert res["partial"] and len(res["scwol"]["vertices"]) == 9


def test_pi1_order_budget_note(tmp_path, capsys):
    d3 = fixture(tmp_path, capsys, "d3_segment")
    code, out = run(capsys, "pi1", "--complex", d3, "--order", "--budget", 200)
    res = json.loads(out)
    assert code == 0 and res["order"] is None and "200" in res["order_note"]


def test_audit_and_conjugacy(tmp_path, capsys):
    tri = fixture(tmp_path, capsys, "tripod")
    code, out = run(capsys, "bijection-audit", "--scwol", tri)
    res = json.loads(out)
    assert code == 0 and res["ok"] and res["sheets"] == [1, 2, 2, 2, 3, 6]
    code, out = run(capsys, "overgroups", "--scwol", tri)
    assert json.loads(out)["count"] == 6
    code, out = run(capsys, "aut", tri, "--subgroups")
    subs = json.loads(out)["inversion_free_subgroups"]
    H = tmp_path / "H.json"
    H.write_text(json.dumps(next(s for s in subs if s["order"] == 3)))
    code, out = run(capsys, "conjugacy", "--scwol", tri, "--H", H)
    res = json.loads(out)
    assert code == 0 and res["oracle_found"] and all(res["checks"].values())


def test_conjugacy_not_free_exit_one(tmp_path, capsys):
    tri = fixture(tmp_path, capsys, "tripod")
    code, out = run(capsys, "aut", tri, "--subgroups")
    subs = json.loads(out)["inversion_free_subgroups"]
    gamma = tmp_path / "gamma.json"
    gamma.write_text(json.dumps(next(s for s in subs if s["order"] == 3)))
    H = tmp_path / "H.json"
    H.write_text(json.dumps(max(subs, key=lambda s: s["order"])))
    code, out = run(capsys, "conjugacy", "--scwol", tri, "--gamma", gamma, "--H", H)
    res = json.loads(out)
    assert code == 1 and res["error"] == "NotFree" and "cell" in res["witness"]


def test_cover_check_and_induced_maps(tmp_path, capsys):
    from cxgroups import io as fio
    from cxgroups.bijection import OvergroupContext, enumerate_overgroups, map_a
    from cxgroups.actions import automorphism_group
    from cxgroups import fixtures as F
    aut = automorphism_group(F.tripod())
    ctx = OvergroupContext(aut, aut.group.subgroup([]))
    lam = map_a(ctx, enumerate_overgroups(ctx)[-1]).lam
    path = tmp_path / "lam.json"
    path.write_text(fio.dumps(fio.morphism_to_json(lam)))
    code, out = run(capsys, "cover-check", path)
    res = json.loads(out)
    assert code == 0 and res["covering"] and res["sheets"] == "6"
    code, out = run(capsys, "induced-maps", path)
    assert code == 0 and all(json.loads(out)["checks"].values())
    a = next(iter(lam.source.scwol.edges))
    t2 = lam.l.vertex_map[lam.source.scwol.t(a)]
    for g in lam.target.local_groups[t2].elements:
        bad = lam.with_edge_element(a, g)
        path.write_text(fio.dumps(fio.morphism_to_json(bad)))
        code, out = run(capsys, "cover-check", path)
        if code == 1:
            assert json.loads(out).get("witnesses") or json.loads(out).get("errors")
            break
    else:
        pytest.fail("no broken variant found")


def test_subdivide_and_dot(tmp_path, capsys):
    seg = fixture(tmp_path, capsys, "segment")
    code, out = run(capsys, "subdivide", seg)
    sd = json.loads(out)
    assert code == 0 and len(sd["vertices"]) == 5
    sd_path = tmp_path / "sd.json"
    sd_path.write_text(out)
    code, out = run(capsys, "aut", sd_path)
    assert json.loads(out)["acts_without_inversions"] is True
    code, out = run(capsys, "export-dot", seg)
    assert code == 0 and out.startswith("digraph")


def test_usage_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_output_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "cxgroups.cli", "bijection-audit", "--scwol"]
    tri = tmp_path / "tripod.json"
    tri.write_text(subprocess.run([sys.executable, "-m", "cxgroups.cli", "fixture", "tripod"],
                                  capture_output=True, text=True, check=True).stdout)
    outs = {subprocess.run(cmd + [str(tri)], capture_output=True, text=True).stdout for _ in range(2)}
    assert len(outs) == 1
