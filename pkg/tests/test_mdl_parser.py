"""Parser strictness: grammar, diagnostics, positions."""

import pytest

from riverhelm.mdl import MdlParseError, MdlValidationError, parse_mdl

MINIMAL = """\
<?xml version="1.0" encoding="UTF-8"?>
<Map id="m" name="mini">
  <Landmark id="A" kind="marker" lat="45.0000000" lon="12.0000000"/>
  <Landmark id="F" kind="fuel_rendezvous_terminal" lat="45.0010000" lon="12.0000000"/>
  <Flow id="f" from="A" to="F" v_from_e="0.1" v_from_n="0" v_to_e="0" v_to_n="0.2">
    <Waypoint ref="A"/>
    <Waypoint ref="F"/>
  </Flow>
</Map>
"""


def test_minimal_document():
    parsed = parse_mdl(MINIMAL)
    assert len(parsed.document.landmarks) == 2
    assert len(parsed.document.flows) == 1
    assert parsed.annotations == ()
    f = parsed.document.flow("f")
    assert f.waypoint_ids == ("A", "F")
    assert f.v_from == (0.1, 0.0)


def test_underpopulated_flow_rejected():
    text = MINIMAL.replace('    <Waypoint ref="A"/>\n', "")
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id in ("FLOW_UNDERPOPULATED", "FLOW_ENDPOINTS")
    assert any(d.rule_id == "FLOW_ENDPOINTS" or d.rule_id == "FLOW_UNDERPOPULATED"
               for d in e.value.diagnostics)


def test_single_waypoint_flow_is_underpopulated():
    text = MINIMAL.replace('    <Waypoint ref="A"/>\n    <Waypoint ref="F"/>\n',
                           '    <Waypoint ref="A"/>\n')
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert any(d.rule_id == "FLOW_UNDERPOPULATED" and d.offending_id == "f"
               for d in e.value.diagnostics)


def test_unclosed_element_is_parse_error():
    text = MINIMAL.replace('  <Landmark id="A" kind="marker" lat="45.0000000" lon="12.0000000"/>',
                           '  <Landmark id="A" kind="marker" lat="45.0000000" lon="12.0000000">')
    with pytest.raises(MdlParseError) as e:
        parse_mdl(text)
    assert e.value.line >= 3


def test_parse_error_position_reported():
    with pytest.raises(MdlParseError) as e:
        parse_mdl("<Map id='m' name='x'><Landmark</Map>")
    assert e.value.line == 1
    assert e.value.col > 1


def test_unknown_element_rejected():
    text = MINIMAL.replace("</Map>", "  <Tide height=\"2\"/>\n</Map>")
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id == "UNKNOWN_ELEMENT"
    assert e.value.diagnostics[0].line is not None


def test_unknown_attribute_rejected():
    text = MINIMAL.replace('<Landmark id="A" kind="marker"', '<Landmark id="A" kind="marker" color="red"')
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id == "UNKNOWN_ATTRIBUTE"


def test_missing_attribute_rejected():
    text = MINIMAL.replace(' lat="45.0000000"', "", 1)
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id == "MISSING_ATTRIBUTE"


def test_bad_coordinate_value():
    text = MINIMAL.replace('lat="45.0000000"', 'lat="95.0000000"', 1)
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id == "BAD_COORDINATE"
    text = MINIMAL.replace('lat="45.0000000"', 'lat="north"', 1)
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id == "BAD_COORDINATE"


def test_dangling_waypoint_ref():
    text = MINIMAL.replace('<Waypoint ref="F"/>', '<Waypoint ref="ZZ"/>')
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert any(d.rule_id == "DANGLING_REF" for d in e.value.diagnostics)
    # diagnostics locate the owning flow element
    d = next(d for d in e.value.diagnostics if d.rule_id == "DANGLING_REF")
    assert d.line is not None


def test_duplicate_landmark_id():
    text = MINIMAL.replace(
        '<Landmark id="F" kind="fuel_rendezvous_terminal"',
        '<Landmark id="A" kind="fuel_rendezvous_terminal"',
    )
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(text)
    assert e.value.rule_id in ("DUPLICATE_ID", "DANGLING_REF")
    assert any(d.rule_id == "DUPLICATE_ID" for d in e.value.diagnostics)


def test_text_content_rejected():
    text = MINIMAL.replace("</Map>", "hello</Map>")
    with pytest.raises(MdlParseError):
        parse_mdl(text)


def test_kind_alias_normalized():
    text = MINIMAL.replace('kind="marker"', 'kind="flow_obstacles"')
    parsed = parse_mdl(text)
    assert parsed.document.landmark("A").kind == "flow_obstacle"


def test_annotation_parsing_and_refs():
    text = MINIMAL.replace(
        "</Map>",
        '  <Annotation robot="sub1" flow="f" lookahead="F">\n'
        '    <Passed ref="A"/>\n'
        "  </Annotation>\n</Map>",
    )
    parsed = parse_mdl(text)
    assert parsed.annotations[0].landmarks_passed == ("A",)
    assert parsed.annotations[0].lookahead_landmark == "F"

    broken = text.replace('<Passed ref="A"/>', '<Passed ref="ZZ"/>')
    with pytest.raises(MdlValidationError) as e:
        parse_mdl(broken)
    assert e.value.rule_id == "DANGLING_REF"


def test_bytes_input_accepted():
    parsed = parse_mdl(MINIMAL.encode("utf-8"))
    assert parsed.document.id == "m"


def test_every_underpopulated_mutation_is_rejected():
    # mutate generated documents: strip a random flow down to one waypoint
    # in the XML itself; the validator must flag that exact flow every time
    import random
    import re

    from riverhelm.mdl import serialize_mdl
    from support import random_document

    rng = random.Random(6021)
    mutated = 0
    while mutated < 40:
        doc, _ = random_document(rng)
        if not doc.flows:
            continue
        victim = rng.choice(doc.flows)
        xml = serialize_mdl(doc)
        flow_re = re.compile(
            rf'(<Flow id="{re.escape(victim.id)}".*?>\n)(.*?)(  </Flow>)', re.S
        )
        match = flow_re.search(xml)
        assert match is not None
        waypoints = re.findall(r"    <Waypoint[^\n]*\n", match.group(2))
        keep = waypoints[0] if rng.random() < 0.5 else ""
        broken = xml[: match.start(2)] + keep + xml[match.end(2):]
        with pytest.raises(MdlValidationError) as e:
            parse_mdl(broken)
        assert any(
            d.rule_id == "FLOW_UNDERPOPULATED" and d.offending_id == victim.id
            for d in e.value.diagnostics
        )
        mutated += 1
