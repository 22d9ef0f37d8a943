"""Independent oracles the main modules are tested against.

Everything here is deliberately written with different algorithms and data
layouts than the package: subsumption via a Floyd-Warshall reachability
matrix, realization via a naive restart-until-stable loop with a recursive
set-theoretic evaluator, edit distance via memoized recursion, and a scalar
re-derivation of the one-sheep drive geometry.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

from shepherdkb import kb

# ---------------------------------------------------------------------------
# Reasoner oracle


def oracle_subsumptions(o: kb.Ontology) -> set:
    """Reflexive-transitive closure by Floyd-Warshall over a dense matrix."""
    names = sorted(o.concepts)
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for c in o.concepts.values():
        for p in c.parents:
            reach[idx[c.name]][idx[p]] = True
        if isinstance(c.definition, kb.And):
            for part in c.definition.parts:
                if isinstance(part, kb.Named):
                    reach[idx[c.name]][idx[part.concept]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {(names[i], names[j])
            for i in range(n) for j in range(n) if reach[i][j]}


def oracle_facts(o: kb.Ontology) -> set:
    facts = set()
    for ind in o.individuals.values():
        for rel, obj in ind.facts:
            facts.add((ind.name, rel, obj))
            inverse = o.relations[rel].inverse
            if inverse is not None:
                facts.add((obj, inverse, ind.name))
    return facts


def oracle_holds(o, ind, expr, memberships, facts):
    """Direct recursive closed-world evaluation of one expression."""
    if isinstance(expr, kb.Named):
        return expr.concept in memberships[ind]
    if isinstance(expr, kb.And):
        return all(oracle_holds(o, ind, p, memberships, facts)
                   for p in expr.parts)
    if isinstance(expr, kb.Or):
        return any(oracle_holds(o, ind, p, memberships, facts)
                   for p in expr.parts)
    if isinstance(expr, kb.Some):
        for subj, rel, obj in facts:
            if subj == ind and rel == expr.relation and \
                    oracle_holds(o, obj, expr.inner, memberships, facts):
                return True
        return False
    if isinstance(expr, kb.Min):
        witnesses = {obj for subj, rel, obj in facts
                     if subj == ind and rel == expr.relation
                     and oracle_holds(o, obj, expr.inner, memberships,
                                      facts)}
        return len(witnesses) >= expr.n
    raise TypeError(f"not a class expression: {expr!r}")


def oracle_memberships(o: kb.Ontology, subsumptions=None, facts=None):
    """Restart-until-stable realization: asserted types, single-primitive
    domain/range typing, subsumption lifting, defined-class satisfaction."""
    if subsumptions is None:
        subsumptions = oracle_subsumptions(o)
    if facts is None:
        facts = oracle_facts(o)

    memberships = {name: set(ind.types)
                   for name, ind in o.individuals.items()}
    for subj, rel, obj in facts:
        r = o.relations[rel]
        if len(r.domain) == 1 and \
                o.concepts[r.domain[0]].definition is None:
            memberships[subj].add(r.domain[0])
        if len(r.range) == 1 and \
                o.concepts[r.range[0]].definition is None:
            memberships[obj].add(r.range[0])

    defined = {name: c.definition for name, c in o.concepts.items()
               if c.definition is not None}
    while True:
        before = {n: frozenset(m) for n, m in memberships.items()}
        for name in memberships:
            for concept in list(memberships[name]):
                for sub, sup in subsumptions:
                    if sub == concept:
                        memberships[name].add(sup)
        for name in memberships:
            for dname, definition in defined.items():
                if oracle_holds(o, name, definition, memberships, facts):
                    memberships[name].add(dname)
        if before == {n: frozenset(m) for n, m in memberships.items()}:
            return {n: frozenset(m) for n, m in memberships.items()}


def oracle_query(o: kb.Ontology, expr) -> list:
    subs = oracle_subsumptions(o)
    facts = oracle_facts(o)
    memberships = oracle_memberships(o, subs, facts)
    return sorted(name for name in o.individuals
                  if oracle_holds(o, name, expr, memberships, facts))


# ---------------------------------------------------------------------------
# Edit distance oracle (memoized recursion, vs the package's DP table)


def oracle_edit_distance(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1,
                   d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


# ---------------------------------------------------------------------------
# Random small-KB generator

EXPR_DEPTH = 2


def _random_expr(rng, concepts, relations, depth=EXPR_DEPTH):
    choices = ["named"]
    if depth > 0 and len(concepts) >= 2:
        choices += ["and", "or"]
    if depth > 0 and relations:
        choices += ["some", "min"]
    kind = rng.choice(choices)
    if kind == "named":
        return kb.Named(rng.choice(concepts))
    if kind in ("and", "or"):
        n = rng.randint(2, min(3, len(concepts)))
        parts = tuple(_random_expr(rng, concepts, relations, depth - 1)
                      for _ in range(n))
        return (kb.And if kind == "and" else kb.Or)(parts)
    rel = rng.choice(relations)
    inner = _random_expr(rng, concepts, relations, depth - 1)
    if kind == "some":
        return kb.Some(rel, inner)
    return kb.Min(rng.randint(1, 3), rel, inner)


def random_axioms(rng: random.Random, max_concepts=8, max_relations=5,
                  max_individuals=6, with_meta=True, with_annotations=False,
                  with_data=False):
    """Axiom list for a random well-formed KB.

    Acyclicity is guaranteed structurally: concept Ci only points (parents,
    definitions) at Cj with j < i.
    """
    n_c = rng.randint(1, max_concepts)
    n_r = rng.randint(0, max_relations)
    n_i = rng.randint(0, max_individuals)
    concepts = [f"C{i}" for i in range(n_c)]
    relations = [f"r{i}" for i in range(n_r)]
    individuals = [f"x{i}" for i in range(n_i)]

    axioms = []
    if with_meta and rng.random() < 0.8:
        axioms.append(kb.annotation("ontology", "iri",
                                    f"urn:random-{rng.randint(0, 999)}"))
    if with_meta and rng.random() < 0.8:
        axioms.append(kb.license_decl("CC0-1.0"))

    for c in concepts:
        axioms.append(kb.declaration("concept", c))
    for r in relations:
        axioms.append(kb.declaration("relation", r,
                                     rng.choice(kb.FAMILIES)))
    attributes = []
    if with_data and concepts:
        for i in range(rng.randint(0, 3)):
            name = f"a{i}"
            attributes.append((name, rng.choice(kb.DATATYPES)))
            axioms.append(kb.declaration("attribute", name,
                                         rng.choice(concepts),
                                         attributes[-1][1]))
    for i in individuals:
        axioms.append(kb.declaration("individual", i))

    for i in range(1, n_c):
        for j in range(i):
            if rng.random() < 0.25:
                axioms.append(kb.subclass_of(concepts[i], concepts[j]))
    for i in range(1, n_c):
        if rng.random() < 0.3:
            axioms.append(kb.equivalent_class(
                concepts[i], _random_expr(rng, concepts[:i], relations)))

    paired = set()
    for r in relations:
        if rng.random() < 0.5:
            axioms.append(kb.domain_of(
                r, tuple(rng.sample(concepts,
                                    rng.randint(1, min(2, n_c))))))
        if rng.random() < 0.5:
            axioms.append(kb.range_of(
                r, tuple(rng.sample(concepts,
                                    rng.randint(1, min(2, n_c))))))
    for a, b in zip(relations[::2], relations[1::2]):
        if rng.random() < 0.6:
            axioms.append(kb.inverse_of(a, b))
            paired |= {a, b}
    if relations and rng.random() < 0.15:
        loner = [r for r in relations if r not in paired]
        if loner:
            axioms.append(kb.inverse_of(loner[0], loner[0]))

    for i in individuals:
        for t in rng.sample(concepts, rng.randint(1, min(2, n_c))):
            axioms.append(kb.class_assertion(i, t))
    for _ in range(rng.randint(0, 2 * n_i)):
        if relations and individuals:
            axioms.append(kb.property_assertion(
                rng.choice(individuals), rng.choice(relations),
                rng.choice(individuals)))
    if with_data and individuals:
        literal_for = {
            "string": lambda: rng.choice(['plain', 'quo"te', 'back\\slash',
                                          '', 'two words']),
            "integer": lambda: rng.randint(-1000, 1000),
            "decimal": lambda: round(rng.uniform(-100.0, 100.0), 3),
            "boolean": lambda: rng.random() < 0.5,
        }
        for _ in range(rng.randint(0, n_i)):
            name, dt = rng.choice(attributes) if attributes else (None, None)
            if name is not None:
                axioms.append(kb.data_assertion(
                    rng.choice(individuals), name, literal_for[dt]()))

    if with_annotations:
        pools = concepts + relations + [a for a, _ in attributes] \
            + individuals
        for subject in pools:
            if rng.random() < 0.5:
                axioms.append(kb.annotation(
                    subject, "label",
                    rng.choice(['a label', 'la "bel"', 'sla\\sh'])))
            if rng.random() < 0.5:
                axioms.append(kb.annotation(subject, "comment",
                                            f"about {subject}"))
    return axioms


def random_ontology(rng: random.Random, **kwargs) -> kb.Ontology:
    return kb.build(random_axioms(rng, **kwargs))


def random_query_expr(rng: random.Random, o: kb.Ontology):
    concepts = sorted(o.concepts)
    relations = sorted(o.relations)
    return _random_expr(rng, concepts, relations)


# ---------------------------------------------------------------------------
# One-sheep drive geometry, re-derived as a scalar recurrence.
#
# Setup: a single sheep at (x0, 5), dog on the same horizontal at (xd, 5)
# to its left, goal at (gx, 5), no noise, no grazing. The sheep always
# flees along +x, the dog's drive target sits d_drive behind the sheep,
# and the approach-gap rule freezes the dog whenever closing in would
# shrink a sub-gap further.


def one_sheep_trace(cfg, sheep_x, dog_x, steps):
    """Returns [(t, sheep_x, dog_x, behaviour)] for the collinear case."""
    out = []
    gx = cfg.goal[0]
    for t in range(1, steps + 1):
        threatened = abs(sheep_x - dog_x) < cfg.r_dog
        new_sheep = sheep_x + cfg.v_sheep if threatened else sheep_x
        new_sheep = min(max(new_sheep, 0.0), cfg.paddock[0])

        behaviour = "drive" if "drive" in cfg.behaviours_allowed \
            else "collect"
        if behaviour == "drive":
            direction = 1.0 if sheep_x > gx else -1.0
            target = sheep_x + cfg.d_drive * direction
        else:
            # the lone sheep is its own centre of mass: offset direction is
            # the zero vector, so the collect point is the sheep itself
            target = sheep_x
        move = target - dog_x
        if abs(move) > cfg.v_dog:
            move = math.copysign(cfg.v_dog, move)
        candidate = dog_x + move
        cur_gap = abs(new_sheep - dog_x)
        new_gap = abs(new_sheep - candidate)
        if new_gap >= cfg.approach_gap or new_gap > cur_gap:
            dog_x = candidate
        dog_x = min(max(dog_x, 0.0), cfg.paddock[0])
        sheep_x = new_sheep
        out.append((t, sheep_x, dog_x, behaviour))
        if abs(sheep_x - gx) <= cfg.goal_radius:
            break
    return out
