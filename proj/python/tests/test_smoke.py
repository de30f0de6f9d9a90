import pytest

import immerse


def test_graph_roundtrip():
    g = immerse.Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert (g.n, g.m) == (4, 3)
    h = immerse.Graph.from_edge_list(g.to_edge_list())
    assert h.edges() == g.edges()
    assert h.fingerprint() == g.fingerprint()


def test_invalid_graph_raises():
    with pytest.raises(ValueError):
        immerse.Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        immerse.generate("bogus:3")


def test_embed_cycle_matches_oracle():
    g = immerse.generate("cycle:5")
    imm, report = immerse.embed(g)
    assert imm.order == 3
    assert immerse.oracle(g)["max_order"] == 3
    assert immerse.verify(g, imm)["ok"]
    assert report["achieved"] == 3
    assert report["audits_ok"]


def test_certificate_text_and_mutation():
    g = immerse.generate("polarity:5")
    imm, _ = immerse.embed(g)
    assert imm.order >= 5
    text = imm.to_certificate()
    again = immerse.Immersion.from_certificate(text)
    assert immerse.verify(g, again)["ok"]
    lines = text.splitlines()
    bad = [("branch 0 %d" % imm.branch[1]) if ln.startswith("branch 0 ") else ln for ln in lines]
    rep = immerse.verify(g, immerse.Immersion.from_certificate("\n".join(bad) + "\n"))
    assert not rep["ok"]
    assert rep["violations"][0][0] == "NonInjective"


def test_polarity_is_c4_free():
    g = immerse.generate("polarity:7")
    assert (g.n, g.m) == (57, 224)
    assert immerse.find_kst(g, 2, 2) is None
    assert immerse.find_kst(immerse.generate("complete:5"), 2, 2) is not None


def test_expansion_helpers():
    assert immerse.rho(1.0, "1/400", 10.0) == 0.0
    assert immerse.rho(10.0, 0.0025, 10.0) > 0.0
    g = immerse.generate("dumbbell:8:1")
    size, witness = immerse.adversarial_neighborhood(g, list(range(8)), 1)
    assert size == 0 and len(witness) == 1
    assert immerse.certify(immerse.generate("complete:10"), eps2=0.1)["status"] == "CertifiedExpander"
    ext = immerse.extract(immerse.generate("complete:8"))
    assert ext["graph"].n == 8


def test_benchmark_is_deterministic():
    a = immerse.run_benchmark("tiny")
    b = immerse.run_benchmark("tiny", workers=2)
    assert a == b
    assert a.splitlines()[0].split("\t")[:3] == ["name", "n", "m"]
