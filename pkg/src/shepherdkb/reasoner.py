"""Closed-world reasoning over ontology snapshots.

classify() computes the subsumption closure, materializes inverse facts and
single-concept domain/range typing, and realizes defined classes under
closed-world, unique-name semantics. Everything is a pure function of the
input snapshot; an InferredModel is immutable and safe to share.

Domain/range typing is only applied when the declared set has exactly one
member and that member is a primitive concept: membership in a defined
class is owned by realization alone, so an under-populated team is never
typed into Team just because a team-flavoured relation mentions it.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kb


class ReasonerError(Exception):
    pass


class IntegrityFailure(ReasonerError):
    def __init__(self, errors):
        self.errors = errors
        super().__init__(f"ontology failed integrity check: {errors}")


class UnknownConcept(ReasonerError):
    pass


class UnknownIndividual(ReasonerError):
    pass


class NotATactic(ReasonerError):
    pass


@dataclass(frozen=True)
class InferredModel:
    base: kb.Ontology
    subsumptions: frozenset   # (sub, super) pairs, reflexive + transitive
    memberships: dict         # individual -> frozenset of concept names
    materialized_facts: frozenset  # (subject, relation, object)


@dataclass(frozen=True)
class QueryResult:
    individuals: tuple
    expression: object


def _transitive_closure(edges, nodes):
    reach = {n: {n} for n in nodes}
    for sub, sup in edges:
        reach[sub].add(sup)
    changed = True
    while changed:
        changed = False
        for n in nodes:
            new = set()
            for m in reach[n]:
                new |= reach[m]
            if not new <= reach[n]:
                reach[n] |= new
                changed = True
    return frozenset((n, m) for n in nodes for m in reach[n])


def _satisfies(ind, expr, memberships, facts_by_subject):
    if isinstance(expr, kb.Named):
        return expr.concept in memberships.get(ind, ())
    if isinstance(expr, kb.And):
        return all(_satisfies(ind, p, memberships, facts_by_subject)
                   for p in expr.parts)
    if isinstance(expr, kb.Or):
        return any(_satisfies(ind, p, memberships, facts_by_subject)
                   for p in expr.parts)
    if isinstance(expr, kb.Some):
        return any(_satisfies(obj, expr.inner, memberships, facts_by_subject)
                   for rel, obj in facts_by_subject.get(ind, ())
                   if rel == expr.relation)
    if isinstance(expr, kb.Min):
        objs = {obj for rel, obj in facts_by_subject.get(ind, ())
                if rel == expr.relation
                and _satisfies(obj, expr.inner, memberships,
                               facts_by_subject)}
        return len(objs) >= expr.n
    raise TypeError(f"not a class expression: {expr!r}")


def classify(o: kb.Ontology) -> InferredModel:
    errors = kb.check_integrity(o)
    if errors:
        raise IntegrityFailure(errors)

    # subsumptions: asserted parents, plus defined C with an And definition
    # subsuming each named top-level operand, reflexively and transitively
    # closed
    edges = set()
    for c in o.concepts.values():
        for p in c.parents:
            edges.add((c.name, p))
        if isinstance(c.definition, kb.And):
            for part in c.definition.parts:
                if isinstance(part, kb.Named):
                    edges.add((c.name, part.concept))
    subsumptions = _transitive_closure(edges, set(o.concepts))

    # materialize inverse facts
    facts = set()
    for i in o.individuals.values():
        for rel, obj in i.facts:
            facts.add((i.name, rel, obj))
    for subj, rel, obj in list(facts):
        inv = o.relations[rel].inverse
        if inv is not None:
            facts.add((obj, inv, subj))

    facts_by_subject = {}
    for subj, rel, obj in facts:
        facts_by_subject.setdefault(subj, []).append((rel, obj))

    memberships = {i.name: set(i.types) for i in o.individuals.values()}

    # domain/range typing: single primitive concept only
    for subj, rel, obj in facts:
        r = o.relations[rel]
        if len(r.domain) == 1:
            d = r.domain[0]
            if o.concepts[d].definition is None:
                memberships[subj].add(d)
        if len(r.range) == 1:
            rg = r.range[0]
            if o.concepts[rg].definition is None:
                memberships[obj].add(rg)

    supers = {}
    for sub, sup in subsumptions:
        supers.setdefault(sub, set()).add(sup)

    defined = [c for c in o.concepts.values() if c.definition is not None]

    # fixpoint: subsumption lifting and defined-class realization feed each
    # other until stable
    changed = True
    while changed:
        changed = False
        for ind, mem in memberships.items():
            lifted = set()
            for c in mem:
                lifted |= supers.get(c, set())
            if not lifted <= mem:
                mem |= lifted
                changed = True
        for c in defined:
            for ind, mem in memberships.items():
                if c.name not in mem and _satisfies(
                        ind, c.definition, memberships, facts_by_subject):
                    mem.add(c.name)
                    changed = True

    return InferredModel(
        base=o,
        subsumptions=subsumptions,
        memberships={i: frozenset(m) for i, m in memberships.items()},
        materialized_facts=frozenset(facts),
    )


def entails(m: InferredModel, sub: str, sup: str) -> bool:
    for n in (sub, sup):
        if n not in m.base.concepts:
            raise UnknownConcept(n)
    return (sub, sup) in m.subsumptions


def query(m: InferredModel, e) -> QueryResult:
    for n in kb.expr_concept_names(e):
        if n not in m.base.concepts:
            raise kb.UnresolvedReference(n)
    for r in kb.expr_relation_names(e):
        if r not in m.base.relations:
            raise kb.UnresolvedReference(r)
    facts_by_subject = {}
    for subj, rel, obj in m.materialized_facts:
        facts_by_subject.setdefault(subj, []).append((rel, obj))
    hits = sorted(ind for ind in m.base.individuals
                  if _satisfies(ind, e, m.memberships, facts_by_subject))
    return QueryResult(individuals=tuple(hits), expression=e)


TASK_RELATION = "taskForAgent"
TACTIC_ROOT = "Tactic"
ACTIONS_ROOT = "Actions"


def infer_behaviours_for_tactic(m: InferredModel, tactic: str) -> set:
    """Action-typed individuals linked to the tactic via taskForAgent
    (asserted behaviour -> tactic; read off the materialized facts)."""
    if tactic not in m.base.individuals:
        raise UnknownIndividual(tactic)
    mem = m.memberships.get(tactic, frozenset())
    tactic_concepts = {c for c in m.base.concepts
                       if (c, TACTIC_ROOT) in m.subsumptions}
    if not mem & tactic_concepts:
        raise NotATactic(tactic)
    action_concepts = {c for c in m.base.concepts
                       if (c, ACTIONS_ROOT) in m.subsumptions}
    out = set()
    for subj, rel, obj in m.materialized_facts:
        if rel == TASK_RELATION and obj == tactic:
            if m.memberships.get(subj, frozenset()) & action_concepts:
                out.add(subj)
    return out
