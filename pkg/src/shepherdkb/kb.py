"""In-memory ontology snapshots: the five-tuple of concepts, relations,
attributes, individuals and axioms.

The axiom list is the single source of truth; every derived map on an
:class:`Ontology` can be rebuilt by folding :func:`assert_axiom` over the
empty snapshot. Snapshots are immutable values: mutation is construct-new.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

FAMILIES = ("controls", "does", "partOf", "has", "is", "affects", "influences")
DATATYPES = ("string", "integer", "decimal", "boolean")


class KbError(Exception):
    pass


class UnresolvedReference(KbError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unresolved reference: {name}")


class CycleIntroduced(KbError):
    pass


class InverseConflict(KbError):
    pass


class DuplicateDeclaration(KbError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"duplicate declaration: {name}")


class BadLiteral(KbError):
    pass


# ---------------------------------------------------------------------------
# Class expressions

@dataclass(frozen=True)
class Named:
    concept: str


@dataclass(frozen=True)
class And:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("and() needs at least 2 operands")


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("or() needs at least 2 operands")


@dataclass(frozen=True)
class Some:
    relation: str
    inner: object


@dataclass(frozen=True)
class Min:
    n: int
    relation: str
    inner: object

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("min() cardinality must be >= 1")


def expr_concept_names(e):
    """All concept names appearing anywhere in an expression."""
    if isinstance(e, Named):
        return {e.concept}
    if isinstance(e, (And, Or)):
        out = set()
        for p in e.parts:
            out |= expr_concept_names(p)
        return out
    if isinstance(e, (Some, Min)):
        return expr_concept_names(e.inner)
    raise TypeError(f"not a class expression: {e!r}")


def expr_relation_names(e):
    if isinstance(e, Named):
        return set()
    if isinstance(e, (And, Or)):
        out = set()
        for p in e.parts:
            out |= expr_relation_names(p)
        return out
    if isinstance(e, (Some, Min)):
        return {e.relation} | expr_relation_names(e.inner)
    raise TypeError(f"not a class expression: {e!r}")


# ---------------------------------------------------------------------------
# Axioms

@dataclass(frozen=True)
class Axiom:
    """A single ontology statement. ``kind`` selects the variant, ``args``
    holds its payload (hashable, so axioms can be set-compared)."""

    kind: str
    args: tuple

    def is_logical(self):
        return self.kind not in ("annotation", "licensedecl")


def declaration(entity_kind, name, *payload):
    return Axiom("declaration", (entity_kind, name) + payload)


def subclass_of(sub, sup):
    return Axiom("subclassof", (sub, sup))


def equivalent_class(name, expr):
    return Axiom("equivalentclass", (name, expr))


def domain_of(relation, concepts):
    return Axiom("domainof", (relation, tuple(concepts)))


def range_of(relation, concepts):
    return Axiom("rangeof", (relation, tuple(concepts)))


def inverse_of(r, s):
    return Axiom("inverseof", (r, s))


def class_assertion(individual, concept):
    return Axiom("classassertion", (individual, concept))


def property_assertion(subject, relation, obj):
    return Axiom("propertyassertion", (subject, relation, obj))


def data_assertion(subject, attribute, literal):
    return Axiom("dataassertion", (subject, attribute, literal))


def annotation(subject, kind, text):
    # kind: "label" | "comment" | "iri" (iri uses subject "ontology")
    return Axiom("annotation", (subject, kind, text))


def license_decl(text):
    return Axiom("licensedecl", (text,))


# ---------------------------------------------------------------------------
# Entities

@dataclass(frozen=True)
class Concept:
    name: str
    parents: frozenset = frozenset()
    definition: object = None  # ClassExpression when defined
    label: str = None
    comment: str = None

    @property
    def kind(self):
        return "defined" if self.definition is not None else "primitive"


@dataclass(frozen=True)
class Relation:
    name: str
    family: str
    domain: tuple = ()
    range: tuple = ()
    inverse: str = None
    label: str = None
    comment: str = None


@dataclass(frozen=True)
class AttributeDef:
    name: str
    domain: str = None
    datatype: str = None
    label: str = None
    comment: str = None


@dataclass(frozen=True)
class Individual:
    name: str
    types: frozenset = frozenset()
    facts: tuple = ()  # (relation, object individual)
    data: tuple = ()   # (attribute, literal)
    label: str = None
    comment: str = None


@dataclass(frozen=True)
class Metrics:
    axiom_count: int
    logical_axiom_count: int
    class_count: int
    object_property_count: int
    data_property_count: int
    individual_count: int
    primitive_class_count: int
    defined_class_count: int

    def as_tuple(self):
        return (self.axiom_count, self.logical_axiom_count, self.class_count,
                self.object_property_count, self.data_property_count,
                self.individual_count, self.primitive_class_count,
                self.defined_class_count)

    FIELDS = ("axiom_count", "logical_axiom_count", "class_count",
              "object_property_count", "data_property_count",
              "individual_count", "primitive_class_count",
              "defined_class_count")


@dataclass(frozen=True)
class IntegrityError:
    code: str
    detail: str
    axiom_index: int = -1


# ---------------------------------------------------------------------------
# Ontology snapshot

@dataclass(frozen=True)
class Ontology:
    iri: str = None
    license: str = None
    concepts: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    attributes: dict = field(default_factory=dict)
    individuals: dict = field(default_factory=dict)
    axioms: tuple = ()

    @staticmethod
    def empty():
        return Ontology()

    def has_name(self, name):
        return (name in self.concepts or name in self.relations
                or name in self.attributes or name in self.individuals)

    def literal_ok(self, attribute, literal):
        dt = self.attributes[attribute].datatype
        if dt == "string":
            return isinstance(literal, str)
        if dt == "integer":
            return isinstance(literal, int) and not isinstance(literal, bool)
        if dt == "decimal":
            return isinstance(literal, float) or (
                isinstance(literal, int) and not isinstance(literal, bool))
        if dt == "boolean":
            return isinstance(literal, bool)
        return False


def _check_name(name):
    if not NAME_RE.match(name):
        raise KbError(f"illegal name: {name!r}")


def _parent_cycle(concepts, sub, sup):
    # adding sub -> sup creates a cycle iff sup already reaches sub
    seen = set()
    stack = [sup]
    while stack:
        c = stack.pop()
        if c == sub:
            return True
        if c in seen:
            continue
        seen.add(c)
        stack.extend(concepts[c].parents if c in concepts else ())
    return False


def _definition_cycle(concepts, name, expr):
    # edges: defined concept -> defined concepts referenced in its
    # definition; ``name`` counts as defined (its definition is ``expr``,
    # being added right now)
    def is_defined(n):
        return n == name or (n in concepts
                             and concepts[n].definition is not None)

    def refs(n):
        c = concepts.get(n)
        if c is None or c.definition is None:
            return ()
        return [r for r in expr_concept_names(c.definition)
                if is_defined(r)]

    seen = set()
    stack = [r for r in expr_concept_names(expr) if is_defined(r)]
    while stack:
        c = stack.pop()
        if c == name:
            return True
        if c in seen:
            continue
        seen.add(c)
        stack.extend(refs(c))
    return False


def assert_axiom(o: Ontology, ax: Axiom) -> Ontology:
    """Return a new snapshot with ``ax`` appended and derived maps updated.

    The input snapshot is never modified. Raises on axioms that would break
    an invariant (unresolved names, cycles, inverse conflicts, duplicates).
    """
    k, a = ax.kind, ax.args

    if k == "declaration":
        entity_kind, name = a[0], a[1]
        _check_name(name)
        if o.has_name(name):
            raise DuplicateDeclaration(name)
        if entity_kind == "concept":
            return replace(o, concepts={**o.concepts, name: Concept(name)},
                           axioms=o.axioms + (ax,))
        if entity_kind == "relation":
            family = a[2]
            if family not in FAMILIES:
                raise KbError(f"unknown relation family: {family}")
            return replace(o, relations={**o.relations,
                                         name: Relation(name, family)},
                           axioms=o.axioms + (ax,))
        if entity_kind == "attribute":
            domain, datatype = a[2], a[3]
            if datatype not in DATATYPES:
                raise KbError(f"unknown datatype: {datatype}")
            if domain not in o.concepts:
                raise UnresolvedReference(domain)
            return replace(o, attributes={**o.attributes,
                                          name: AttributeDef(name, domain,
                                                             datatype)},
                           axioms=o.axioms + (ax,))
        if entity_kind == "individual":
            return replace(o, individuals={**o.individuals,
                                           name: Individual(name)},
                           axioms=o.axioms + (ax,))
        raise KbError(f"unknown entity kind: {entity_kind}")

    if k == "subclassof":
        sub, sup = a
        for n in (sub, sup):
            if n not in o.concepts:
                raise UnresolvedReference(n)
        if sub == sup or _parent_cycle(o.concepts, sub, sup):
            raise CycleIntroduced(f"{sub} <= {sup}")
        c = o.concepts[sub]
        c2 = replace(c, parents=c.parents | {sup})
        return replace(o, concepts={**o.concepts, sub: c2},
                       axioms=o.axioms + (ax,))

    if k == "equivalentclass":
        name, expr = a
        if name not in o.concepts:
            raise UnresolvedReference(name)
        for n in expr_concept_names(expr):
            if n not in o.concepts:
                raise UnresolvedReference(n)
        for r in expr_relation_names(expr):
            if r not in o.relations:
                raise UnresolvedReference(r)
        if o.concepts[name].definition is not None:
            raise DuplicateDeclaration(f"{name} already defined")
        if name in expr_concept_names(expr) or \
                _definition_cycle(o.concepts, name, expr):
            raise CycleIntroduced(f"definition of {name}")
        c2 = replace(o.concepts[name], definition=expr)
        return replace(o, concepts={**o.concepts, name: c2},
                       axioms=o.axioms + (ax,))

    if k in ("domainof", "rangeof"):
        rel, names = a
        if rel not in o.relations:
            raise UnresolvedReference(rel)
        for n in names:
            if n not in o.concepts:
                raise UnresolvedReference(n)
        r = o.relations[rel]
        which = "domain" if k == "domainof" else "range"
        current = getattr(r, which)
        merged = current + tuple(n for n in names if n not in current)
        r2 = replace(r, **{which: merged})
        return replace(o, relations={**o.relations, rel: r2},
                       axioms=o.axioms + (ax,))

    if k == "inverseof":
        r_name, s_name = a
        for n in (r_name, s_name):
            if n not in o.relations:
                raise UnresolvedReference(n)
        r, s = o.relations[r_name], o.relations[s_name]
        if r.inverse not in (None, s_name):
            raise InverseConflict(f"{r_name} already inverse of {r.inverse}")
        if s.inverse not in (None, r_name):
            raise InverseConflict(f"{s_name} already inverse of {s.inverse}")
        rels = {**o.relations,
                r_name: replace(r, inverse=s_name),
                s_name: replace(s, inverse=r_name)}
        return replace(o, relations=rels, axioms=o.axioms + (ax,))

    if k == "classassertion":
        ind, concept = a
        if ind not in o.individuals:
            raise UnresolvedReference(ind)
        if concept not in o.concepts:
            raise UnresolvedReference(concept)
        i = o.individuals[ind]
        i2 = replace(i, types=i.types | {concept})
        return replace(o, individuals={**o.individuals, ind: i2},
                       axioms=o.axioms + (ax,))

    if k == "propertyassertion":
        subj, rel, obj = a
        if subj not in o.individuals:
            raise UnresolvedReference(subj)
        if rel not in o.relations:
            raise UnresolvedReference(rel)
        if obj not in o.individuals:
            raise UnresolvedReference(obj)
        i = o.individuals[subj]
        i2 = replace(i, facts=i.facts + ((rel, obj),))
        return replace(o, individuals={**o.individuals, subj: i2},
                       axioms=o.axioms + (ax,))

    if k == "dataassertion":
        subj, attr, literal = a
        if subj not in o.individuals:
            raise UnresolvedReference(subj)
        if attr not in o.attributes:
            raise UnresolvedReference(attr)
        if not o.literal_ok(attr, literal):
            raise BadLiteral(f"{literal!r} does not fit "
                             f"{o.attributes[attr].datatype}")
        i = o.individuals[subj]
        i2 = replace(i, data=i.data + ((attr, literal),))
        return replace(o, individuals={**o.individuals, subj: i2},
                       axioms=o.axioms + (ax,))

    if k == "annotation":
        subj, field_name, text = a
        if field_name == "iri" and subj == "ontology":
            return replace(o, iri=text, axioms=o.axioms + (ax,))
        if field_name not in ("label", "comment"):
            raise KbError(f"unknown annotation kind: {field_name}")
        for pool_name in ("concepts", "relations", "attributes",
                          "individuals"):
            pool = getattr(o, pool_name)
            if subj in pool:
                e2 = replace(pool[subj], **{field_name: text})
                return replace(o, **{pool_name: {**pool, subj: e2}},
                               axioms=o.axioms + (ax,))
        raise UnresolvedReference(subj)

    if k == "licensedecl":
        return replace(o, license=a[0], axioms=o.axioms + (ax,))

    raise KbError(f"unknown axiom kind: {k}")


def build(axioms) -> Ontology:
    """Fold a sequence of axioms over the empty snapshot."""
    o = Ontology.empty()
    for ax in axioms:
        o = assert_axiom(o, ax)
    return o


def metrics(o: Ontology) -> Metrics:
    primitive = sum(1 for c in o.concepts.values() if c.definition is None)
    defined = len(o.concepts) - primitive
    return Metrics(
        axiom_count=len(o.axioms),
        logical_axiom_count=sum(1 for ax in o.axioms if ax.is_logical()),
        class_count=len(o.concepts),
        object_property_count=len(o.relations),
        data_property_count=len(o.attributes),
        individual_count=len(o.individuals),
        primitive_class_count=primitive,
        defined_class_count=defined,
    )


def check_integrity(o: Ontology) -> list:
    """Verify every snapshot invariant; one IntegrityError per violation.

    Snapshots built through assert_axiom are clean by construction; this
    catches hand-assembled or deserialized states.
    """
    errors = []

    names = {}
    for pool_name in ("concepts", "relations", "attributes", "individuals"):
        for n in getattr(o, pool_name):
            if n in names:
                errors.append(IntegrityError(
                    "NamespaceClash",
                    f"{n} declared as both {names[n]} and {pool_name}"))
            names[n] = pool_name

    for c in o.concepts.values():
        for p in c.parents:
            if p not in o.concepts:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{c.name} parent {p}"))
        if c.definition is not None:
            for n in expr_concept_names(c.definition):
                if n not in o.concepts:
                    errors.append(IntegrityError(
                        "UnresolvedReference", f"{c.name} definition ref {n}"))
            for r in expr_relation_names(c.definition):
                if r not in o.relations:
                    errors.append(IntegrityError(
                        "UnresolvedReference", f"{c.name} definition ref {r}"))

    # parent graph acyclicity (report each concept on a cycle once)
    state = {}

    def visit(n, path):
        if state.get(n) == "done":
            return False
        if n in path:
            return True
        path.add(n)
        cyc = any(visit(p, path) for p in o.concepts[n].parents
                  if p in o.concepts)
        path.discard(n)
        state[n] = "done" if not cyc else "cyclic"
        return cyc

    for n in o.concepts:
        if state.get(n) is None and visit(n, set()):
            errors.append(IntegrityError("CycleIntroduced",
                                         f"parent cycle through {n}"))

    for r in o.relations.values():
        if r.family not in FAMILIES:
            errors.append(IntegrityError("UnknownFamily",
                                         f"{r.name}: {r.family}"))
        for n in r.domain + r.range:
            if n not in o.concepts:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{r.name} domain/range {n}"))
        if r.inverse is not None:
            inv = o.relations.get(r.inverse)
            if inv is None:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{r.name} inverse {r.inverse}"))
            elif inv.inverse != r.name:
                errors.append(IntegrityError(
                    "InverseAsymmetry",
                    f"{r.name} -> {r.inverse} -> {inv.inverse}"))

    for i in o.individuals.values():
        for t in i.types:
            if t not in o.concepts:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{i.name} type {t}"))
        for rel, obj in i.facts:
            if rel not in o.relations:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{i.name} fact relation {rel}"))
            if obj not in o.individuals:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{i.name} fact object {obj}"))
        for attr, literal in i.data:
            if attr not in o.attributes:
                errors.append(IntegrityError(
                    "UnresolvedReference", f"{i.name} data attr {attr}"))
            elif not o.literal_ok(attr, literal):
                errors.append(IntegrityError(
                    "BadLiteral", f"{i.name}.{attr} = {literal!r}"))

    return errors
