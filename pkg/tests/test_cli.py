import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from realsurf import fixtures
from realsurf.cli import WARNINGS, run


def call(*argv):
    code, out = run(list(argv))
    return code, out


def call_json(*argv):
    code, out = call(*argv)
    return code, json.loads(out)


def write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_lattice_info_geiser():
    code, rep = call_json("lattice-info", fixtures.path("geiser_split"))
    assert code == 0
    assert rep["invariants"]["holo"] == {"rank": 1, "r": 2}
    cls = rep["minimal_pair_class"]
    assert (cls["variant"], cls["degree"], cls["r"]) == ("DelPezzoRankOne", 2, 2)
    assert rep["h1"]["holo"] == [2] * 6


def test_lattice_info_identity(tmp_path):
    code, rep = call_json("lattice-info", write(tmp_path, {"kind": "lattice-pair", "n": 4}))
    assert code == 0
    assert rep["lattice"]["rank"] == 5 and rep["invariants"]["galois"]["rank"] == 5
    assert rep["h1"]["galois"] == []


def test_lattice_info_example_contraction():
    code, rep = call_json("lattice-info", fixtures.path("ex25_lattice"))
    assert code == 0
    assert len(rep["eqmmp"]["steps"]) == 1
    assert rep["eqmmp"]["final_n"] == 5 and rep["eqmmp"]["final_invariant_rank"] == 2
    assert rep["minimal_pair_class"]["case"] == 2


def test_malformed_json(tmp_path):
    code, rep = call_json("lattice-info", write(tmp_path, "{not json"))
    assert code == 2 and rep["error"]["type"] == "input"


def test_schema_violations(tmp_path):
    code, rep = call_json("lattice-info", write(tmp_path, {"kind": "lattice-pair"}))
    assert code == 2 and "schema" in rep["error"]["message"]
    bad = {"kind": "quadric-pencil", "degree": 1, "entries": [[1, 0]] * 5 + [[1]]}
    code, rep = call_json("pencil", write(tmp_path, bad))
    assert code == 2
    code, rep = call_json("pencil", fixtures.path("p2"))
    assert code == 2


def test_missing_file():
    code, rep = call_json("pencil", "/nonexistent/doc.json")
    assert code == 2


def test_pencil_example():
    code, rep = call_json("pencil", fixtures.path("ex25_pencil"))
    assert code == 0
    assert rep["counts"] == {"geometric": 6, "real": 4, "conjugate_pairs": 1}
    assert rep["topology"]["components"] == 1
    assert rep["verdict"] == {"degree_two": True, "reason": "Rational"}
    assert WARNINGS["smoothness"] in rep["warnings"]


def test_pencil_minimal_bundle():
    code, rep = call_json("pencil", fixtures.path("two_component_pencil"))
    assert rep["kollar"] == {"kollar_class": "C3_MinimalConicBundle", "m": 2}
    assert rep["verdict"]["degree_two"] is True


def test_pencil_empty_locus():
    code, rep = call_json("pencil", fixtures.path("empty_locus_pencil"))
    assert rep["verdict"] == {"degree_two": False, "reason": "NoRealPoint"}


def test_pencil_not_smooth(tmp_path):
    doc = {"kind": "quadric-pencil", "degree": 2,
           "entries": [[1, 0, 0], [0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 0, 0], [1, 0, 1]]}
    code, rep = call_json("pencil", write(tmp_path, doc))
    assert code == 0
    assert "kollar" not in rep and WARNINGS["kollar_skipped"] in rep["warnings"]


@pytest.mark.parametrize("name,kollar,admits,reason", [
    ("bertini_twisted", "C5_MinimalDP1_Rank1", False, "MinimalDP1orDP2Rank1"),
    ("geiser_twisted", "C4_MinimalDP2_Rank1", False, "MinimalDP1orDP2Rank1"),
    ("kowalevskaya_pencil", "C3_MinimalConicBundle", True, "MinimalConicBundleWithRealPoint"),
    ("p2", "C2_Rational", True, "Rational"),
])
def test_classify_verdicts(name, kollar, admits, reason):
    code, rep = call_json("classify", fixtures.path(name))
    assert code == 0
    assert rep["kollar"]["kollar_class"] == kollar
    assert rep["verdict"] == {"degree_two": admits, "reason": reason}


def test_classify_catalog_flags():
    code, rep = call_json("classify", fixtures.path("geiser_split"))
    assert rep["catalog"]["class"] == "G3" and rep["quotient"] == "Rational"
    code, rep = call_json("classify", fixtures.path("dp4_conic_bundle"))
    assert rep["catalog"] == {"ambiguous": ["T_4", "Tpp_4", "I_1"]} and rep["quotient"] is None
    code, rep = call_json("classify", fixtures.path("dp4_conic_bundle"), "--twist", "2")
    assert rep["catalog"]["class"] == "Tpp_4"
    code, rep = call_json("classify", fixtures.path("dp4_conic_bundle"), "--genus", "1", "--g-exceptional")
    assert rep["catalog"]["class"] == "dJ_1"
    code, rep = call_json("classify", fixtures.path("geiser_split"), "--field", "general")
    assert code == 0


def test_classify_inconsistent_extras_exit_3():
    code, rep = call_json("classify", fixtures.path("geiser_split"), "--genus", "2")
    assert code == 3 and rep["error"]["type"] == "inconsistent"


def test_reports_are_deterministic():
    for name in fixtures.names():
        cmd = "pencil" if fixtures.document(name)["kind"] == "quadric-pencil" else "lattice-info"
        assert call(cmd, fixtures.path(name)) == call(cmd, fixtures.path(name))


def test_every_warning_is_documented():
    documented = set(WARNINGS.values())
    for name in fixtures.names():
        for cmd in ("classify", "pencil" if fixtures.document(name)["kind"] == "quadric-pencil" else "lattice-info"):
            code, rep = call_json(cmd, fixtures.path(name))
            assert set(rep.get("warnings", [])) <= documented


def test_pretty_output():
    code, out = call("pencil", fixtures.path("ex25_pencil"), "--pretty")
    assert code == 0
    assert any(line.startswith("topology.components") for line in out.splitlines())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "realsurf", "classify", fixtures.path("p2")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"]["reason"] == "Rational"


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-10, 10) | st.text(max_size=5),
    lambda children: st.lists(children, max_size=4) | st.dictionaries(st.text(max_size=8), children, max_size=4),
    max_leaves=12,
)


@st.composite
def fuzzed_documents(draw):
    base = draw(st.sampled_from(["p2", "ex25_pencil", "geiser_split", "kowalevskaya_pencil"]))
    doc = fixtures.document(base)
    keys = sorted(doc)
    for key in draw(st.lists(st.sampled_from(keys + ["extra"]), max_size=3)):
        doc[key] = draw(json_values)
    return doc


@settings(max_examples=60)
@given(fuzzed_documents(), st.sampled_from(["lattice-info", "pencil", "classify"]))
def test_fuzzed_documents_never_crash(tmp_path_factory, doc, cmd):
    path = tmp_path_factory.mktemp("fuzz") / "doc.json"
    path.write_text(json.dumps(doc))
    code, out = call(cmd, str(path))
    rep = json.loads(out)
    assert code in (0, 2, 3)
    assert (code == 0) == ("error" not in rep)
