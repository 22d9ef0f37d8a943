"""Pitfall scanner: rules, severities, the dirty fixture and its manifest."""

import pytest

from shepherdkb import kb, kbx, lint
from shepherdkb.reasoner import IntegrityFailure

EXPECTED_SEVERITY = {"P4": "minor", "P7": "minor", "P8": "minor",
                     "P11": "important", "P13": "minor", "P19": "critical",
                     "P41": "important"}


def annotated(o, *names):
    """Attach label+comment to the listed entities (avoids P8 noise)."""
    for n in names:
        o = kb.assert_axiom(o, kb.annotation(n, "label", n))
        o = kb.assert_axiom(o, kb.annotation(n, "comment", f"about {n}"))
    return o


class TestSeverities:
    def test_mapping_is_total_and_fixed(self):
        assert lint.SEVERITY == EXPECTED_SEVERITY
        assert set(lint.CODES) == set(EXPECTED_SEVERITY)

    def test_findings_carry_mapped_severity(self):
        for f in lint.scan_fixture_dirty().findings:
            assert f.severity == EXPECTED_SEVERITY[f.code]


class TestRules:
    def test_p7_merged_names(self):
        o = kb.build([kb.license_decl("CC0-1.0")] + [
            kb.declaration("concept", n)
            for n in ("BlockAndHold", "CastAndMuster", "AbilitiesAndTraits")])
        codes = [f for f in lint.scan(o).findings if f.code == "P7"]
        assert sorted(f.subject for f in codes) == \
            ["AbilitiesAndTraits", "BlockAndHold", "CastAndMuster"]

    @pytest.mark.parametrize("name,flagged", [
        ("BlockAndHold", True), ("CastOrMuster", True),
        ("Andes", False), ("Oracle", False), ("BAndC", False),
        ("Band", False), ("GetAndSet", True), ("sandOr", False),
        ("r2AndD2", True),
    ])
    def test_p7_regex_boundaries(self, name, flagged):
        o = kb.build([kb.declaration("concept", name)])
        assert any(f.code == "P7" for f in lint.scan(o).findings) == flagged

    def test_p11_missing_domain_and_range(self):
        o = kb.build([
            kb.license_decl("CC0-1.0"),
            kb.declaration("relation", "testAbilityTo", "is"),
        ])
        o = annotated(o, "testAbilityTo")
        report = lint.scan(o)
        p11 = [f for f in report.findings if f.code == "P11"]
        assert len(p11) == 1 and p11[0].subject == "testAbilityTo"
        assert p11[0].severity == "important"

    def test_p19_multiple_ranges(self):
        o = kb.build([
            kb.declaration("concept", "A"),
            kb.declaration("concept", "B"),
            kb.declaration("relation", "r", "has"),
            kb.domain_of("r", ("A",)),
            kb.range_of("r", ("A", "B")),
        ])
        assert any(f.code == "P19" and f.severity == "critical"
                   for f in lint.scan(o).findings)

    def test_p4_orphan_concept(self):
        report = lint.scan_fixture_dirty()
        assert [f.subject for f in report.findings if f.code == "P4"] == \
            ["TacticOrphan"]

    def test_p41_no_license(self):
        o = kb.build([kb.declaration("concept", "A")])
        assert any(f.code == "P41" for f in lint.scan(o).findings)

    def test_p8_reported_for_all_entity_kinds(self):
        o = kb.build([
            kb.license_decl("CC0-1.0"),
            kb.declaration("concept", "A"),
            kb.declaration("relation", "r", "has"),
            kb.declaration("attribute", "a", "A", "string"),
            kb.declaration("individual", "x"),
        ])
        p8 = {f.subject for f in lint.scan(o).findings if f.code == "P8"}
        assert p8 == {"A", "r", "a", "x"}

    def test_integrity_precondition(self):
        from dataclasses import replace
        o = kb.build([kb.declaration("concept", "A")])
        broken = replace(o, concepts={
            "A": replace(o.concepts["A"], parents=frozenset({"Gone"}))})
        with pytest.raises(IntegrityFailure):
            lint.scan(broken)


class TestDirtyFixture:
    def test_covers_exactly_seven_codes(self):
        report = lint.scan_fixture_dirty()
        assert set(report.counts_by_code) == set(lint.CODES)

    def test_counts_match_manifest(self):
        report = lint.scan_fixture_dirty()
        manifest = lint.load_fixture_manifest()
        assert report.counts_by_code == manifest["counts"]
        assert report.total == manifest["total"]

    def test_subjects_match_manifest(self):
        report = lint.scan_fixture_dirty()
        manifest = lint.load_fixture_manifest()
        for code in lint.CODES:
            got = sorted(f.subject for f in report.findings
                         if f.code == code)
            assert got == sorted(manifest["subjects"][code]), code

    def test_idempotent(self):
        assert lint.scan_fixture_dirty() == lint.scan_fixture_dirty()

    def test_report_accounting(self):
        report = lint.scan_fixture_dirty()
        assert report.total == len(report.findings)
        assert report.total == sum(report.counts_by_code.values())

    def test_findings_sorted(self):
        report = lint.scan_fixture_dirty()
        keys = [(int(f.code[1:]), f.subject) for f in report.findings]
        assert keys == sorted(keys)


class TestRemediationClosure:
    def test_documented_fixes_clear_every_finding(self):
        """Apply the documented fix for each defect class, rescan, get 0."""
        remediated = """\
ontology "urn:dirty-fixture"
license "CC0-1.0"
class Agent
class Sheep sub Agent
class Tactic
class TacticUse sub Tactic
class BlockHold sub Agent
class CastMuster sub Agent
class AbilitiesTraits sub Agent
prop testAbilityTo family is domain Agent range AbilitiesTraits inverse abilityTestedOn
prop abilityTestedOn family is domain AbilitiesTraits range Agent inverse testAbilityTo
prop ensures family has domain Agent range Sheep inverse ensuredBy
prop ensuredBy family has domain Sheep range Agent inverse ensures
prop oppositeOf family is domain Tactic range Tactic inverse oppositeOf
ind dog1 : Agent
ind use1 : TacticUse
"""
        o = kbx.parse(remediated)
        entities = (list(o.concepts) + list(o.relations)
                    + list(o.attributes) + list(o.individuals))
        o = annotated(o, *entities)
        assert lint.scan(o).total == 0


class TestReportFormats:
    def test_text_has_total_line(self):
        text = lint.scan_fixture_dirty().to_text()
        assert text.splitlines()[-1].startswith("total: ")

    def test_json_round_trips_counts(self):
        import json
        report = lint.scan_fixture_dirty()
        doc = json.loads(report.to_json())
        assert doc["total"] == report.total
        assert doc["counts_by_code"] == report.counts_by_code
