"""KBX: line-oriented text format for ontology snapshots.

parse() accepts any document conforming to the grammar; serialize() emits
the canonical form (fixed category order, sorted names, LF endings, single
spaces) so equal ontologies always serialize byte-identically. export_json()
is a one-way dump for tooling.
"""

from __future__ import annotations

import json
import re

from . import kb

STATEMENT_KEYWORDS = ("ontology", "license", "class", "prop", "data", "ind",
                      "fact", "factd", "label", "comment")

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\["\\])*")
  | (?P<number>[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<punct>[(),=:])
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, line, column, expected, found):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(
            f"line {line}, column {column}: expected {expected}, "
            f"found {found}")


class UnsupportedOperation(Exception):
    pass


def _escape(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unescape(tok):
    body = tok[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            out.append(body[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Tokens:
    """Token stream for one source line."""

    def __init__(self, text, line_no):
        self.line_no = line_no
        self.toks = []  # (kind, value, column)
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(line_no, pos + 1, "token", text[pos])
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), m.start() + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.toks):
            return self.toks[self.i]
        return ("eof", "", len(self.toks) and self.toks[-1][2] or 1)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, kind, value=None, what=None):
        k, v, col = self.next()
        if k != kind or (value is not None and v != value):
            raise ParseError(self.line_no, col, what or value or kind,
                             v or "end of line")
        return v

    def at_end(self):
        return self.i >= len(self.toks)

    def fail(self, expected):
        k, v, col = self.peek()
        raise ParseError(self.line_no, col, expected, v or "end of line")


def _parse_expr(ts):
    k, v, col = ts.peek()
    if k != "name":
        ts.fail("class expression")
    ts.next()
    if v in ("and", "or") and ts.peek()[1] == "(":
        ts.next()
        parts = [_parse_expr(ts)]
        while ts.peek()[1] == ",":
            ts.next()
            parts.append(_parse_expr(ts))
        ts.expect("punct", ")")
        if len(parts) < 2:
            ts.fail("at least 2 operands")
        cls = kb.And if v == "and" else kb.Or
        return cls(tuple(parts))
    if v == "some" and ts.peek()[1] == "(":
        ts.next()
        rel = ts.expect("name", what="relation name")
        ts.expect("punct", ",")
        inner = _parse_expr(ts)
        ts.expect("punct", ")")
        return kb.Some(rel, inner)
    if v == "min" and ts.peek()[1] == "(":
        ts.next()
        nk, nv, ncol = ts.next()
        if nk != "number" or not nv.isdigit() or int(nv) < 1:
            raise ParseError(ts.line_no, ncol, "positive integer", nv)
        ts.expect("punct", ",")
        rel = ts.expect("name", what="relation name")
        ts.expect("punct", ",")
        inner = _parse_expr(ts)
        ts.expect("punct", ")")
        return kb.Min(int(nv), rel, inner)
    return kb.Named(v)


def expr_to_text(e):
    if isinstance(e, kb.Named):
        return e.concept
    if isinstance(e, kb.And):
        return "and(" + ", ".join(expr_to_text(p) for p in e.parts) + ")"
    if isinstance(e, kb.Or):
        return "or(" + ", ".join(expr_to_text(p) for p in e.parts) + ")"
    if isinstance(e, kb.Some):
        return f"some({e.relation}, {expr_to_text(e.inner)})"
    if isinstance(e, kb.Min):
        return f"min({e.n}, {e.relation}, {expr_to_text(e.inner)})"
    raise TypeError(f"not a class expression: {e!r}")


def parse_expr_text(text):
    """Parse a standalone KBX class expression (used by query surfaces)."""
    ts = _Tokens(text, 1)
    e = _parse_expr(ts)
    if not ts.at_end():
        ts.fail("end of expression")
    return e


def _namelist(ts):
    names = [ts.expect("name", what="name")]
    while ts.peek()[1] == ",":
        ts.next()
        names.append(ts.expect("name", what="name"))
    return names


def _literal(ts):
    k, v, col = ts.next()
    if k == "string":
        return _unescape(v)
    if k == "name" and v in ("true", "false"):
        return v == "true"
    if k == "number":
        if re.fullmatch(r"[+-]?\d+", v):
            return int(v)
        return float(v)
    raise ParseError(ts.line_no, col, "literal", v or "end of line")


def _parse_statement(ts):
    """One parsed line -> (keyword, payload dict)."""
    kw_kind, kw, col = ts.next()
    if kw_kind != "name" or kw not in STATEMENT_KEYWORDS:
        raise ParseError(ts.line_no, col, "statement keyword",
                         kw or "end of line")

    if kw in ("ontology", "license"):
        s = ts.expect("string", what="string")
        st = (kw, {"text": _unescape(s)})
    elif kw == "class":
        name = ts.expect("name", what="class name")
        defn = None
        subs = []
        if ts.peek()[1] == "defined":
            ts.next()
            ts.expect("punct", "=")
            defn = _parse_expr(ts)
        if ts.peek()[1] == "sub":
            ts.next()
            subs = _namelist(ts)
        st = (kw, {"name": name, "defined": defn, "sub": subs})
    elif kw == "prop":
        name = ts.expect("name", what="property name")
        ts.expect("name", "family")
        fam = ts.expect("name", what="family keyword")
        if fam not in kb.FAMILIES:
            raise ParseError(ts.line_no, ts.toks[ts.i - 1][2],
                             "family keyword", fam)
        domain, range_, inverse = [], [], None
        if ts.peek()[1] == "domain":
            ts.next()
            domain = _namelist(ts)
        if ts.peek()[1] == "range":
            ts.next()
            range_ = _namelist(ts)
        if ts.peek()[1] == "inverse":
            ts.next()
            inverse = ts.expect("name", what="relation name")
        st = (kw, {"name": name, "family": fam, "domain": domain,
                   "range": range_, "inverse": inverse})
    elif kw == "data":
        name = ts.expect("name", what="attribute name")
        ts.expect("name", "domain")
        domain = ts.expect("name", what="class name")
        ts.expect("name", "range")
        dt = ts.expect("name", what="datatype")
        if dt not in kb.DATATYPES:
            raise ParseError(ts.line_no, ts.toks[ts.i - 1][2], "datatype", dt)
        st = (kw, {"name": name, "domain": domain, "datatype": dt})
    elif kw == "ind":
        name = ts.expect("name", what="individual name")
        ts.expect("punct", ":")
        types = _namelist(ts)
        st = (kw, {"name": name, "types": types})
    elif kw == "fact":
        subj = ts.expect("name", what="subject")
        rel = ts.expect("name", what="relation")
        obj = ts.expect("name", what="object")
        st = (kw, {"subject": subj, "relation": rel, "object": obj})
    elif kw == "factd":
        subj = ts.expect("name", what="subject")
        attr = ts.expect("name", what="attribute")
        lit = _literal(ts)
        st = (kw, {"subject": subj, "attribute": attr, "literal": lit})
    else:  # label | comment
        subj = ts.expect("name", what="entity name")
        s = ts.expect("string", what="string")
        st = (kw, {"subject": subj, "text": _unescape(s)})

    if not ts.at_end():
        ts.fail("end of line")
    return st


def parse_document(text):
    """Parse raw text into (statement, line_no) pairs; no KB semantics yet."""
    statements = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        ts = _Tokens(line, line_no)
        statements.append((_parse_statement(ts), line_no))
    return statements


def parse(text: str) -> kb.Ontology:
    """Parse a KBX document into an ontology snapshot.

    Axioms are asserted in phases (meta, declarations, structure, typing,
    facts, annotations) so statement order inside a category never matters;
    any kb-core rejection is re-raised with the offending source line.
    """
    statements = parse_document(text)

    phases = {n: [] for n in range(6)}  # phase -> [(axiom, line)]
    inverse_pairs = set()

    for (kw, p), ln in statements:
        if kw == "ontology":
            phases[0].append((kb.annotation("ontology", "iri", p["text"]),
                              ln))
        elif kw == "license":
            phases[0].append((kb.license_decl(p["text"]), ln))
        elif kw == "class":
            phases[1].append((kb.declaration("concept", p["name"]), ln))
            if p["defined"] is not None:
                phases[2].append(
                    (kb.equivalent_class(p["name"], p["defined"]), ln))
            for s in p["sub"]:
                phases[2].append((kb.subclass_of(p["name"], s), ln))
        elif kw == "prop":
            phases[1].append(
                (kb.declaration("relation", p["name"], p["family"]), ln))
            if p["domain"]:
                phases[2].append(
                    (kb.domain_of(p["name"], tuple(p["domain"])), ln))
            if p["range"]:
                phases[2].append(
                    (kb.range_of(p["name"], tuple(p["range"])), ln))
            if p["inverse"] is not None:
                pair = frozenset((p["name"], p["inverse"]))
                if pair not in inverse_pairs or len(pair) == 1:
                    inverse_pairs.add(pair)
                    phases[2].append(
                        (kb.inverse_of(p["name"], p["inverse"]), ln))
        elif kw == "data":
            phases[1].append(
                (kb.declaration("attribute", p["name"], p["domain"],
                                p["datatype"]), ln))
        elif kw == "ind":
            phases[1].append((kb.declaration("individual", p["name"]), ln))
            for t in p["types"]:
                phases[3].append((kb.class_assertion(p["name"], t), ln))
        elif kw == "fact":
            phases[4].append(
                (kb.property_assertion(p["subject"], p["relation"],
                                       p["object"]), ln))
        elif kw == "factd":
            phases[4].append(
                (kb.data_assertion(p["subject"], p["attribute"],
                                   p["literal"]), ln))
        else:  # label | comment
            phases[5].append((kb.annotation(p["subject"], kw, p["text"]), ln))

    o = kb.Ontology.empty()
    for phase in range(6):
        for ax, ln in phases[phase]:
            try:
                o = kb.assert_axiom(o, ax)
            except kb.KbError as exc:
                raise kb.KbError(f"line {ln}: {exc}") from exc
    return o


def _literal_text(lit):
    if isinstance(lit, bool):
        return "true" if lit else "false"
    if isinstance(lit, str):
        return _escape(lit)
    return repr(lit)


def serialize(o: kb.Ontology) -> str:
    """Canonical KBX text for a snapshot; equal ontologies give equal bytes."""
    lines = []
    if o.iri is not None:
        lines.append(f"ontology {_escape(o.iri)}")
    if o.license is not None:
        lines.append(f"license {_escape(o.license)}")

    for name in sorted(o.concepts):
        c = o.concepts[name]
        line = f"class {name}"
        if c.definition is not None:
            line += f" defined = {expr_to_text(c.definition)}"
        if c.parents:
            line += " sub " + ",".join(sorted(c.parents))
        lines.append(line)

    for name in sorted(o.relations):
        r = o.relations[name]
        line = f"prop {name} family {r.family}"
        if r.domain:
            line += " domain " + ",".join(sorted(r.domain))
        if r.range:
            line += " range " + ",".join(sorted(r.range))
        if r.inverse is not None:
            line += f" inverse {r.inverse}"
        lines.append(line)

    for name in sorted(o.attributes):
        a = o.attributes[name]
        lines.append(f"data {name} domain {a.domain} range {a.datatype}")

    for name in sorted(o.individuals):
        i = o.individuals[name]
        if not i.types:
            raise kb.KbError(
                f"individual {name} has no asserted type; not serializable")
        lines.append(f"ind {name} : " + ",".join(sorted(i.types)))

    facts = []
    datas = []
    for name in sorted(o.individuals):
        i = o.individuals[name]
        facts.extend((name, rel, obj) for rel, obj in i.facts)
        datas.extend((name, attr, lit) for attr, lit in i.data)
    for subj, rel, obj in sorted(facts):
        lines.append(f"fact {subj} {rel} {obj}")
    for subj, attr, lit in sorted(datas, key=lambda d: (d[0], d[1],
                                                        _literal_text(d[2]))):
        lines.append(f"factd {subj} {attr} {_literal_text(lit)}")

    entities = []
    for pool in (o.concepts, o.relations, o.attributes, o.individuals):
        entities.extend(pool.values())
    for e in sorted(entities, key=lambda e: e.name):
        if getattr(e, "label", None) is not None:
            lines.append(f"label {e.name} {_escape(e.label)}")
    for e in sorted(entities, key=lambda e: e.name):
        if getattr(e, "comment", None) is not None:
            lines.append(f"comment {e.name} {_escape(e.comment)}")

    return "\n".join(lines) + ("\n" if lines else "")


def equivalent(a: kb.Ontology, b: kb.Ontology) -> bool:
    """Content equality, ignoring axiom-list and insertion order."""
    return serialize(a) == serialize(b)


def _axiom_json(ax):
    args = []
    for v in ax.args:
        if isinstance(v, (kb.Named, kb.And, kb.Or, kb.Some, kb.Min)):
            args.append(expr_to_text(v))
        elif isinstance(v, tuple):
            args.append(list(v))
        else:
            args.append(v)
    return {"kind": ax.kind, "args": args}


def export_json(o: kb.Ontology) -> str:
    m = kb.metrics(o)
    doc = {
        "iri": o.iri,
        "license": o.license,
        "concepts": {
            c.name: {
                "kind": c.kind,
                "parents": sorted(c.parents),
                "definition": (expr_to_text(c.definition)
                               if c.definition is not None else None),
                "label": c.label,
                "comment": c.comment,
            } for c in o.concepts.values()
        },
        "relations": {
            r.name: {
                "family": r.family,
                "domain": sorted(r.domain),
                "range": sorted(r.range),
                "inverse": r.inverse,
                "label": r.label,
                "comment": r.comment,
            } for r in o.relations.values()
        },
        "attributes": {
            a.name: {
                "domain": a.domain,
                "datatype": a.datatype,
                "label": a.label,
                "comment": a.comment,
            } for a in o.attributes.values()
        },
        "individuals": {
            i.name: {
                "types": sorted(i.types),
                "facts": sorted([rel, obj] for rel, obj in i.facts),
                "data": sorted(([attr, lit] for attr, lit in i.data),
                               key=lambda d: (d[0], str(d[1]))),
                "label": i.label,
                "comment": i.comment,
            } for i in o.individuals.values()
        },
        "axioms": [_axiom_json(ax) for ax in o.axioms],
        "metrics": {f: getattr(m, f) for f in kb.Metrics.FIELDS},
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def import_json(text):
    """JSON export is one-way by contract."""
    raise UnsupportedOperation("the JSON export cannot be re-imported; "
                               "use the .kbx format")
