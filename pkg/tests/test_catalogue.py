import pytest

from thetadesign.action import Decomposition, GroupAction
from thetadesign.catalogue import (
    Catalogue,
    CatalogueEntry,
    builtin_catalogue,
    builtin_files,
    derived_catalogue,
    lookup,
    parse_catalogue,
    save_derived,
    serialize,
)
from thetadesign.errors import ArityMismatch, CatalogueSyntaxError, NotFound, PointOutOfRange
from thetadesign.theta import HostGraph, make_theta

K20 = """\
# a comment
entry theta(1,2,7) host K(20)
act: (0..19 +4)
block: 4 17 0 9 7 1 12 15 13
block: 4 1 2 17 8 9 3 15 11
block: 0 1 8 12 15 17 18 13 3
end
"""


def test_parse_simple_entry():
    (e,) = parse_catalogue(K20)
    assert e.theta == make_theta(1, 2, 7)
    assert e.host == HostGraph.complete(20)
    assert e.decomposition.developed_count == 3
    assert e.decomposition.expanded_count == 15


def test_residue_parts():
    text = "entry theta(2,2,6) host K(5,5,5) parts residue-mod 3\nend\n"
    (e,) = parse_catalogue(text)
    assert e.host.parts[1] == (1, 4, 7, 10, 13)


@pytest.mark.parametrize("text,line,col,cls", [
    ("entry theta(1,2,7) host K(20)\nblock: 0 1 2\nend\n", 2, 8, ArityMismatch),
    ("entry theta(1,2,7) host K(20)\nblock: 0 1 2 3 4 5 6 7 20\nend\n", 2, 24, PointOutOfRange),
    ("entry theta(1,2,7) host K(20)\nblock: 0 1 2 x 4 5 6 7 8\nend\n", 2, 14, CatalogueSyntaxError),
    ("entry theta(1,1,7) host K(20)\nend\n", 1, 7, CatalogueSyntaxError),
    ("  block: 1 2\n", 1, 3, CatalogueSyntaxError),
    ("entry theta(1,2,7) host K(20)\n  colour: red\nend\n", 2, 3, CatalogueSyntaxError),
    ("entry theta(1,2,7) host K(20)\n", 1, 1, CatalogueSyntaxError),
    ("entry theta(1,2,7) host K(20)\ndeveloped: 2\nend\n", 1, 1, CatalogueSyntaxError),
])
def test_syntax_errors_carry_position(text, line, col, cls):
    with pytest.raises(cls) as info:
        parse_catalogue(text, "t.cat")
    assert (info.value.line, info.value.column) == (line, col)
    assert str(info.value).startswith(f"t.cat:{line}:{col}:")


def test_roundtrip_all_builtin_files():
    for p in builtin_files():
        entries = parse_catalogue(p.read_text(), str(p))
        again = parse_catalogue(serialize(entries))
        assert [e.decomposition for e in again] == [e.decomposition for e in entries]


def test_source_note_roundtrip():
    (e,) = parse_catalogue(K20)
    tagged = CatalogueEntry(e.decomposition, "hand check")
    text = serialize([tagged])
    assert "# source: hand check" in text
    (back,) = parse_catalogue(text)
    assert back.source == "hand check"


def test_builtin_catalogue_shape():
    cat = builtin_catalogue()
    assert len(cat) == 665
    assert len(builtin_files()) == 73
    hosts = {h.label() for h in cat.hosts_for(make_theta(1, 2, 7))}
    assert {"K(16)", "K(20)", "K(25)", "K(10,10,10)"} <= hosts


def test_multipartite_lookup_ignores_part_order():
    theta = make_theta(2, 2, 6)
    a = lookup(theta, HostGraph.multipartite([5, 10]))
    b = lookup(theta, HostGraph.multipartite([10, 5]))
    assert a is b
    assert sorted(a.host.part_sizes) == [5, 10]


def test_lookup_missing():
    with pytest.raises(NotFound):
        lookup(make_theta(1, 2, 7), HostGraph.complete(21), derived=False)
    with pytest.raises(NotFound):
        Catalogue().lookup(make_theta(1, 2, 7), HostGraph.complete(20))


def test_derived_save_and_reload(tmp_path, monkeypatch):
    monkeypatch.setenv("THETA_CACHE_DIR", str(tmp_path))
    theta = make_theta(1, 2, 7)
    host = HostGraph.complete(21)
    # [DERIVED] a cyclic K21 base block found by the searcher
    d = Decomposition(theta, host, GroupAction.cyclic(21), ((19, 10, 6, 5, 11, 13, 12, 17, 7),), 1)
    assert derived_catalogue().__len__() == 0
    path = save_derived(CatalogueEntry(d, "test"))
    assert path.parent == tmp_path / "derived"
    assert lookup(theta, host).decomposition == d


def test_derived_rejects_bad_files(tmp_path, monkeypatch):
    monkeypatch.setenv("THETA_CACHE_DIR", str(tmp_path))
    (tmp_path / "derived").mkdir()
    (tmp_path / "derived" / "junk.cat").write_text("entry nonsense\n")
    bad = "entry theta(1,2,7) host K(21)\nact: (0..20 +1)\nblock: 0 1 2 3 4 5 6 7 8\nend\n"
    (tmp_path / "derived" / "bad.cat").write_text(bad)
    assert len(derived_catalogue()) == 0
