import io
import json
import re

import pytest

from gcoherent.cli import run
from gcoherent.liealg import build_chevalley, catalog, read_definition, write_definition
from gcoherent.ring import Poly


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_list_names_catalog():
    code, out, _ = call("list")
    assert code == 0
    assert out.split() == list(catalog())


@pytest.mark.parametrize("verb", ["build", "validate", "coherent", "dual", "norm",
                                  "oplus", "realize", "check", "vertex", "loop", "diagram"])
def test_every_verb_runs(verb):
    extra = ["--root", "r"] if verb == "vertex" else []
    code, out, _ = call(verb, "A1", *extra)
    assert code == 0
    assert out.strip()


def test_norm_a1_latex():
    code, out, _ = call("norm", "A1", "--convention=chevalley", "--format=latex")
    assert code == 0
    assert r"\bar{\zeta}_{r}" in out and r"\zeta'_{r}" in out
    assert r"\frac{1}{4}" in out


def test_norm_a1_plain():
    _, out, _ = call("norm", "A1")
    assert out.strip() == "1 - zetabar[r]*zetap[r] + 1/4*zetabar[r]^2*zetap[r]^2"


def test_oplus_a2_symbolic():
    code, out, _ = call("oplus", "A2", "--symbolic")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[2].startswith("r+s: zeta[r+s] + zetap[r+s] + 1/2*N[A2:r,s]*zeta[r]*zetap[s]")


def test_oplus_numeric_drops_symbols():
    _, out, _ = call("oplus", "A2", "--numeric")
    assert "N[" not in out


def test_coherent_latex_uses_kets():
    _, out, _ = call("coherent", "A2", "--format", "latex")
    assert r"\rangle" in out and "N_{r,s}" in out


def test_dual_latex_uses_bras():
    _, out, _ = call("dual", "A1", "--format", "latex")
    assert r"\langle" in out


def test_json_outputs_parse():
    for verb in ("coherent", "norm", "oplus", "realize", "check"):
        code, out, _ = call(verb, "A2", "--format", "json")
        assert code == 0
        json.loads(out)


def test_determinism():
    for argv in (("coherent", "G2"), ("oplus", "B2", "--format", "json"),
                 ("diagram", "fan(3)", "--format", "svg")):
        assert call(*argv) == call(*argv)


def test_usage_errors():
    assert call("frobnicate", "A1")[0] == 2
    assert call("norm", "E9")[0] == 2
    assert call("norm", "A1", "--format", "svg")[0] == 2
    assert call()[0] == 2


def test_validate_failure_names_triple():
    code, out, err = call("validate", "fan(3)-printed")
    assert code == 1
    assert "(r, s, h)" in err


def test_corrupted_definition_file(tmp_path):
    bad = build_chevalley("A2").with_bracket("r", "s", {"r+s": Poly(2)})
    path = tmp_path / "bad.alg"
    path.write_text(write_definition(bad))
    code, _, err = call("validate", str(path))
    assert code == 1
    assert "jacobi" in err and "(-r, r, s)" in err


def test_build_json_round_trip(tmp_path):
    code, out, _ = call("build", "B2", "--format", "json")
    assert code == 0
    path = tmp_path / "b2.json"
    path.write_text(out)
    g = read_definition(json.loads(out)["definition"])
    assert write_definition(g) == write_definition(build_chevalley("B2"))
    assert call("norm", str(path)) == call("norm", "B2")


def test_output_file(tmp_path):
    target = tmp_path / "p.txt"
    code, out, _ = call("norm", "A1", "-o", str(target))
    assert code == 0
    assert target.read_text().strip() == call("norm", "A1")[1].strip()


def test_format_environment_variable(monkeypatch):
    monkeypatch.setenv("GCOHERENT_FORMAT", "json")
    _, out, _ = call("norm", "A1")
    json.loads(out)


def test_noncyclic_needs_flag():
    assert call("coherent", "fan(3)-printed")[0] == 1
    code, out, _ = call("coherent", "fan(3)-printed", "--allow-noncyclic")
    assert code == 0


def test_loop_modes():
    code, out, _ = call("loop", "A1", "-M", "1", "--level", "1")
    assert code == 0
    assert "zetap[r@-1]" in out


def test_vertex_paths():
    a = call("vertex", "A2", "--root", "r", "--path", "oplus")
    b = call("vertex", "A2", "--root", "r", "--path", "direct")
    assert a[0] == 0 and a[1] == b[1]


# --- SVG structure ---

def svg(name):
    code, out, _ = call("diagram", name, "--format", "svg")
    assert code == 0
    return out


def arrows(doc):
    return re.findall(r'<g class="arrow ([a-z ]+)"', doc)


def test_heisenberg_diagram():
    doc = svg("heisenberg(1)")
    assert arrows(doc) == ["double", "single stacked"]
    assert doc.count('class="shaft"') == 3
    assert "<circle" not in doc


def test_nonabelian2_diagram():
    doc = svg("nonabelian2")
    assert doc.count("<circle") == 1
    assert arrows(doc) == ["single"]


def test_fan_diagram():
    doc = svg("fan(3)")
    assert doc.count("<circle") == 1
    assert arrows(doc) == ["single"] * 5
    ups = [r for r in re.findall(r'data-root="([^"]+)"', doc) if "s" in r]
    assert sorted(ups) == ["-r+s", "r+s", "s"]


def test_a2_diagram_marks_cartan_dimension():
    doc = svg("A2")
    assert '<text class="dim"' in doc
    assert len(arrows(doc)) == 6
