"""The shipped shepherding-teaming ontology and its conformance report.

Content is constructed programmatically; the packaged ``onto4mat.kbx`` and
``onto4mat.meta`` files are byte-identical regenerations of this module's
output. The published ontology this models is far larger than what its
paper prints, so the shipped snapshot is a faithful subset and
``conformance`` reports the gap against the published summary statistics
instead of pretending to close it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import kb

# ---------------------------------------------------------------------------
# Class hierarchy: (name, parent) with None for top concepts

CLASSES = [
    ("Agent", None),
    ("Shepherd", "Agent"),
    ("Sheepdog", "Agent"),
    ("Sheep", "Agent"),
    ("ArtificialAgent", "Agent"),
    ("AbilitiesTraits", None),
    ("Agility", "AbilitiesTraits"),
    ("Awareness", "AbilitiesTraits"),
    ("Endurance", "AbilitiesTraits"),
    ("Influence", "AbilitiesTraits"),
    ("Memory", "AbilitiesTraits"),
    ("Perception", "AbilitiesTraits"),
    ("Reactivity", "AbilitiesTraits"),
    ("Resilience", "AbilitiesTraits"),
    ("Sociability", "AbilitiesTraits"),
    ("Stamina", "AbilitiesTraits"),
    ("Team", None),
    ("Intent", None),
    ("Plan", "Intent"),
    ("Goal", "Intent"),
    ("Task", "Intent"),
    ("Scope", "Intent"),
    ("Actions", None),
    ("IndividualActions", "Actions"),
    ("Approach", "IndividualActions"),
    ("Avoid", "IndividualActions"),
    ("Graze", "IndividualActions"),
    ("Observe", "IndividualActions"),
    ("Pursue", "IndividualActions"),
    ("Wait", "IndividualActions"),
    ("TeamActions", "Actions"),
    ("Aggregation", "TeamActions"),
    ("Alignment", "TeamActions"),
    ("Dispersion", "TeamActions"),
    ("Tactic", None),
    ("IndividualTactic", "Tactic"),
    ("BlockHold", "IndividualTactic"),
    ("CastMuster", "IndividualTactic"),
    ("Droving", "IndividualTactic"),
    ("TeamTactic", "Tactic"),
    ("Evasion", "TeamTactic"),
    ("Scattering", "TeamTactic"),
    ("Swarm", None),
    ("Configuration", None),
    ("Formation", None),
    ("ColumnFormation", "Formation"),
    ("LineFormation", "Formation"),
    ("WedgeFormation", "Formation"),
    ("Role", None),
    ("Leader", "Role"),
    ("Follower", "Role"),
    ("SynchronisationMechanism", None),
    ("SpatialSynchronisation", "SynchronisationMechanism"),
    ("TemporalSynchronisation", "SynchronisationMechanism"),
    ("Environment", None),
    ("Paddock", "Environment"),
    ("GoalRegion", "Environment"),
    ("Obstacle", "Environment"),
    ("Fence", "Obstacle"),
    ("Tree", "Obstacle"),
    ("Water", "Obstacle"),
]

# Object properties as mutually-inverse pairs:
# (forward, family, domain, range, backward, backward family)
RELATION_PAIRS = [
    ("teamHasAgent", "has", "Team", "Agent",
     "agentPartOfTeam", "partOf"),
    ("intentHasGoal", "has", "Intent", "Goal",
     "goalPartOfIntent", "partOf"),
    ("intentHasPlan", "has", "Intent", "Plan",
     "planPartOfIntent", "partOf"),
    ("intentHasTask", "has", "Intent", "Task",
     "taskPartOfIntent", "partOf"),
    ("intentHasScope", "has", "Intent", "Scope",
     "scopePartOfIntent", "partOf"),
    ("swarmHasConfiguration", "has", "Swarm", "Configuration",
     "configurationPartOfSwarm", "partOf"),
    ("configurationHasFormation", "has", "Configuration", "Formation",
     "formationPartOfConfiguration", "partOf"),
    ("swarmHasSynchronisationMechanism", "has", "Swarm",
     "SynchronisationMechanism",
     "synchronisationMechanismPartOfSwarm", "partOf"),
    ("agentHasRole", "has", "Agent", "Role",
     "roleHeldByAgent", "is"),
    ("agentHasAbility", "has", "Agent", "AbilitiesTraits",
     "abilityHeldByAgent", "is"),
    ("agentDoesAnIndividualTactic", "does", "Agent", "IndividualTactic",
     "individualTacticDoneByAgent", "is"),
    ("agentDoesAnIndividualAction", "does", "Agent", "IndividualActions",
     "individualActionDoneByAgent", "is"),
    ("teamDoesCollectiveAction", "does", "Team", "TeamActions",
     "collectiveActionDoneByTeam", "is"),
    ("teamDoesCollectiveTactic", "does", "Team", "TeamTactic",
     "collectiveTacticDoneByTeam", "is"),
    ("shepherdControlsSheepdog", "controls", "Shepherd", "Sheepdog",
     "sheepdogControlledByShepherd", "is"),
    ("sheepdogControlsSwarm", "controls", "Sheepdog", "Swarm",
     "swarmControlledBySheepdog", "is"),
    ("obstacleAffectsAgent", "affects", "Obstacle", "Agent",
     "agentAffectedByObstacle", "is"),
    ("environmentAffectsTeam", "affects", "Environment", "Team",
     "teamAffectedByEnvironment", "is"),
    ("individualTacticInfluencesTeam", "influences", "IndividualTactic",
     "Team", "teamInfluencedByIndividualTactic", "is"),
    ("sheepdogInfluencesSheep", "influences", "Sheepdog", "Sheep",
     "sheepInfluencedBySheepdog", "is"),
    ("taskForAgent", "is", "IndividualActions", "IndividualTactic",
     "tacticHasTask", "has"),
]

ATTRIBUTES = [
    ("maxSpeed", "Agent", "decimal"),
    ("visionRange", "Agent", "decimal"),
    ("influenceRadius", "Sheepdog", "decimal"),
    ("memberCount", "Team", "integer"),
    ("isActive", "Agent", "boolean"),
    ("displayName", "Agent", "string"),
]

INDIVIDUALS = [
    ("sheepdog", "Sheepdog"),
    ("shepherd", "Shepherd"),
    ("herd", "Agent"),
    ("sheep1", "Sheep"),
    ("sheep2", "Sheep"),
    ("sheep3", "Sheep"),
    ("shepherding", "IndividualTactic"),
    ("mustering", "IndividualTactic"),
    ("flocking", "TeamActions"),
    ("mobbing", "TeamTactic"),
    ("collect", "IndividualActions"),
    ("drive", "IndividualActions"),
    ("paddock1", "Paddock"),
]

FACTS = [
    ("sheepdog", "agentDoesAnIndividualTactic", "shepherding"),
    ("shepherding", "individualTacticInfluencesTeam", "herd"),
    ("herd", "teamHasAgent", "sheep1"),
    ("herd", "teamHasAgent", "sheep2"),
    ("herd", "teamHasAgent", "sheep3"),
    ("herd", "teamDoesCollectiveAction", "flocking"),
    ("herd", "teamDoesCollectiveTactic", "mobbing"),
    ("collect", "taskForAgent", "mustering"),
    ("drive", "taskForAgent", "mustering"),
    ("shepherd", "shepherdControlsSheepdog", "sheepdog"),
    ("sheepdog", "sheepdogInfluencesSheep", "sheep1"),
]

DATA_FACTS = [
    ("sheepdog", "maxSpeed", 1.5),
    ("sheepdog", "influenceRadius", 15.0),
    ("sheepdog", "isActive", True),
    ("sheepdog", "displayName", "Kelpie"),
    ("sheep1", "maxSpeed", 1.0),
    ("herd", "memberCount", 3),
]

IRI = "urn:onto4mat"
LICENSE = "CC-BY-4.0"

TEAM_DEFINITION = kb.And((
    kb.Named("Agent"),
    kb.Some("teamDoesCollectiveAction", kb.Named("TeamActions")),
    kb.Some("teamDoesCollectiveTactic", kb.Named("TeamTactic")),
    kb.Min(2, "teamHasAgent", kb.Named("Agent")),
))


def _words(name):
    return re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", name)


@lru_cache(maxsize=1)
def load_builtin() -> kb.Ontology:
    axioms = [kb.annotation("ontology", "iri", IRI), kb.license_decl(LICENSE)]

    for name, _parent in CLASSES:
        axioms.append(kb.declaration("concept", name))
    for fwd, fam, dom, rng, back, back_fam in RELATION_PAIRS:
        axioms.append(kb.declaration("relation", fwd, fam))
        axioms.append(kb.declaration("relation", back, back_fam))
    for name, dom, dt in ATTRIBUTES:
        axioms.append(kb.declaration("attribute", name, dom, dt))
    for name, typ in INDIVIDUALS:
        axioms.append(kb.declaration("individual", name))

    for name, parent in CLASSES:
        if parent is not None:
            axioms.append(kb.subclass_of(name, parent))
    axioms.append(kb.equivalent_class("Team", TEAM_DEFINITION))

    for fwd, fam, dom, rng, back, back_fam in RELATION_PAIRS:
        axioms.append(kb.domain_of(fwd, (dom,)))
        axioms.append(kb.range_of(fwd, (rng,)))
        axioms.append(kb.domain_of(back, (rng,)))
        axioms.append(kb.range_of(back, (dom,)))
        axioms.append(kb.inverse_of(fwd, back))

    for name, typ in INDIVIDUALS:
        axioms.append(kb.class_assertion(name, typ))
    for subj, rel, obj in FACTS:
        axioms.append(kb.property_assertion(subj, rel, obj))
    for subj, attr, lit in DATA_FACTS:
        axioms.append(kb.data_assertion(subj, attr, lit))

    # every entity carries a label and a comment (annotation lint demands
    # both on concepts, properties, attributes, and individuals)
    for name, _parent in CLASSES:
        axioms.append(kb.annotation(name, "label", _words(name)))
        axioms.append(kb.annotation(
            name, "comment",
            f"The {_words(name)} class of the teaming vocabulary."))
    for fwd, fam, dom, rng, back, back_fam in RELATION_PAIRS:
        for rel, d, r, f in ((fwd, dom, rng, fam), (back, rng, dom,
                                                    back_fam)):
            axioms.append(kb.annotation(rel, "label", _words(rel)))
            axioms.append(kb.annotation(
                rel, "comment",
                f"Relates {d} to {r} ({f} family)."))
    for name, dom, dt in ATTRIBUTES:
        axioms.append(kb.annotation(name, "label", _words(name)))
        axioms.append(kb.annotation(
            name, "comment", f"{dt} attribute of {dom}."))
    for name, typ in INDIVIDUALS:
        axioms.append(kb.annotation(name, "label", name))
        axioms.append(kb.annotation(
            name, "comment", f"Named {typ} individual."))

    return kb.build(axioms)


# ---------------------------------------------------------------------------
# Meta-property profile shipped alongside the ontology

_DEFAULT_META = "R=+ I=+ U=- D=-"
_META_OVERRIDES = {
    "Team": "R=~ I=+ U=- D=-",
    "Role": "R=~ I=- U=- D=+",
    "Leader": "R=~ I=- U=- D=+",
    "Follower": "R=~ I=- U=- D=+",
    "Plan": "R=+ I=+ U=- D=+",
    "Goal": "R=+ I=+ U=- D=+",
    "Task": "R=+ I=+ U=- D=+",
    "Scope": "R=+ I=+ U=- D=+",
    "Paddock": "R=+ I=+ U=+ D=-",
    "GoalRegion": "R=+ I=+ U=+ D=-",
    "Obstacle": "R=+ I=+ U=+ D=-",
    "Fence": "R=+ I=+ U=+ D=-",
    "Tree": "R=+ I=+ U=+ D=-",
    "Water": "R=+ I=+ U=+ D=-",
}


def meta_profile_text() -> str:
    lines = ["# Meta-property assignments for the shipped ontology"]
    for name, _parent in sorted(CLASSES):
        lines.append(f"meta {name} {_META_OVERRIDES.get(name, _DEFAULT_META)}")
    return "\n".join(lines) + "\n"


def data_text(filename) -> str:
    """Packaged data file contents (onto4mat.kbx, fixtures, defaults)."""
    return (resources.files("shepherdkb") / "data" / filename).read_text()


# ---------------------------------------------------------------------------
# Conformance against the published summary statistics

TARGET_METRICS = kb.Metrics(
    axiom_count=1060,
    logical_axiom_count=562,
    class_count=167,
    object_property_count=57,
    data_property_count=16,
    individual_count=18,
    primitive_class_count=231,
    defined_class_count=30,
)


@dataclass(frozen=True)
class ConformanceReport:
    shipped: kb.Metrics
    target: kb.Metrics
    divergence: dict  # field -> shipped - target

    def as_dict(self):
        return {
            "shipped": {f: getattr(self.shipped, f)
                        for f in kb.Metrics.FIELDS},
            "target": {f: getattr(self.target, f)
                       for f in kb.Metrics.FIELDS},
            "divergence": dict(self.divergence),
        }


def conformance(o: kb.Ontology) -> ConformanceReport:
    shipped = kb.metrics(o)
    divergence = {f: getattr(shipped, f) - getattr(TARGET_METRICS, f)
                  for f in kb.Metrics.FIELDS}
    return ConformanceReport(shipped=shipped, target=TARGET_METRICS,
                             divergence=divergence)
