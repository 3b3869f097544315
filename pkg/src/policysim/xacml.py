"""XACML 3.0 subset: parsing, serialization and translation to SePL terms.

Attribute URNs are compared by their trailing local name, case-insensitively.
Description, Obligation and Advice elements are accepted and recorded by
name but carry no meaning.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import (
    GrammarViolation, UnknownCombiner, UnsupportedCombiner, UnsupportedMatchFunction,
    XmlSyntax,
)
from .model import (
    OTHER, Assert, AttributeSchema, Choice, ConstraintTuple, DenyAll, DenyOv, Effect,
    OMinus, PermitAll, PermitOv, PolicyTerm, Scoped, Seq, chain,
)
from .semantics import expand_abbreviations

NAMESPACE = "urn:oasis:names:tc:xacml:3.0:core:schema:wd-17"
PLACEHOLDER = "⟨any⟩"

COMBINERS = (
    "deny-overrides", "permit-overrides", "first-applicable", "ordered-permit-overrides",
    "only-one-applicable", "deny-unless-permit", "permit-unless-deny",
)
MATCH_FUNCTIONS = ("string-equal", "string-at-least")
IGNORED = {
    "description", "obligation", "obligations", "obligationexpression",
    "obligationexpressions", "advice", "adviceexpression", "adviceexpressions",
}


def local_name(urn: str) -> str:
    """Trailing segment of a URN, lowercased."""
    return urn.strip().rsplit(":", 1)[-1].strip().lower()


# ---------------------------------------------------------------------------
# parse tree


@dataclass(frozen=True)
class AttributeDesignator:
    attribute_id: str
    category: str = ""
    data_type: str = ""
    must_be_present: str = ""

    @property
    def attribute(self) -> str:
        return local_name(self.attribute_id)


@dataclass(frozen=True)
class AttributeValue:
    value: str
    data_type: str = ""


@dataclass(frozen=True)
class Match:
    match_id: str
    value: AttributeValue
    designator: AttributeDesignator

    @property
    def function(self) -> str:
        return local_name(self.match_id)


@dataclass(frozen=True)
class AllOf:
    matches: tuple[Match, ...]


@dataclass(frozen=True)
class AnyOf:
    all_ofs: tuple[AllOf, ...]


@dataclass(frozen=True)
class Target:
    any_ofs: tuple[AnyOf, ...] = ()

    def matches(self) -> Iterable[Match]:
        for any_of in self.any_ofs:
            for all_of in any_of.all_ofs:
                yield from all_of.matches


@dataclass(frozen=True)
class Apply:
    function_id: str
    args: tuple["Expression", ...]

    @property
    def function(self) -> str:
        return local_name(self.function_id)


Expression = Union[Apply, AttributeValue, AttributeDesignator]


@dataclass(frozen=True)
class Condition:
    expression: Expression


@dataclass(frozen=True)
class XRule:
    rule_id: str
    effect: str
    target: Optional[Target] = None
    condition: Optional[Condition] = None
    ignored: tuple[str, ...] = ()


@dataclass(frozen=True)
class Policy:
    policy_id: str
    version: str
    combiner_id: str
    target: Target
    rules: tuple[XRule, ...]
    ignored: tuple[str, ...] = ()

    @property
    def combiner(self) -> str:
        return local_name(self.combiner_id)


@dataclass(frozen=True)
class PolicySet:
    policy_set_id: str
    version: str
    combiner_id: str
    target: Target
    policies: tuple[Union[Policy, "PolicySet"], ...]
    ignored: tuple[str, ...] = ()

    @property
    def combiner(self) -> str:
        return local_name(self.combiner_id)


XacmlNode = Union[Policy, PolicySet]


# ---------------------------------------------------------------------------
# parsing


def _tag(el: ET.Element) -> str:
    return el.tag.rsplit("}", 1)[-1].lower()


def _attr(el: ET.Element, name: str, required: bool = True) -> str:
    for key, value in el.attrib.items():
        if key.rsplit("}", 1)[-1].lower() == name.lower():
            return value
    if required:
        raise GrammarViolation(f"<{_tag(el)}> is missing attribute {name}")
    return ""


def _children(el: ET.Element, allowed: dict[str, int]) -> tuple[list[ET.Element], list[str]]:
    """Child elements in document order, plus the names of ignored ones."""
    kept, ignored = [], []
    for child in el:
        tag = _tag(child)
        if tag in IGNORED:
            ignored.append(tag)
        elif tag in allowed:
            kept.append(child)
        else:
            raise GrammarViolation(f"<{child.tag.rsplit('}', 1)[-1]}> is not allowed inside <{_tag(el)}>")
    return kept, ignored


def _check_combiner(alg_id: str, policy_set: bool) -> str:
    name = local_name(alg_id)
    if name not in COMBINERS:
        raise UnknownCombiner(f"unknown combining algorithm {alg_id!r}")
    if name == "only-one-applicable" and not policy_set:
        raise UnknownCombiner("only-one-applicable is a policy combining algorithm only")
    return name


def _designator(el: ET.Element) -> AttributeDesignator:
    return AttributeDesignator(
        _attr(el, "AttributeId"), _attr(el, "Category", False),
        _attr(el, "DataType", False), _attr(el, "MustBePresent", False))


def _value(el: ET.Element) -> AttributeValue:
    if len(el):
        raise GrammarViolation("<AttributeValue> must contain text only")
    return AttributeValue((el.text or "").strip(), _attr(el, "DataType", False))


def _match(el: ET.Element) -> Match:
    kids, _ = _children(el, {"attributevalue": 1, "attributedesignator": 1})
    values = [k for k in kids if _tag(k) == "attributevalue"]
    designators = [k for k in kids if _tag(k) == "attributedesignator"]
    if len(values) != 1 or len(designators) != 1:
        raise GrammarViolation("<Match> needs exactly one AttributeValue and one AttributeDesignator")
    return Match(_attr(el, "MatchId"), _value(values[0]), _designator(designators[0]))


def _target(el: ET.Element) -> Target:
    any_ofs = []
    for a in _children(el, {"anyof": 1})[0]:
        all_ofs = []
        for b in _children(a, {"allof": 1})[0]:
            matches = tuple(_match(m) for m in _children(b, {"match": 1})[0])
            if not matches:
                raise GrammarViolation("<AllOf> needs at least one <Match>")
            all_ofs.append(AllOf(matches))
        if not all_ofs:
            raise GrammarViolation("<AnyOf> needs at least one <AllOf>")
        any_ofs.append(AnyOf(tuple(all_ofs)))
    return Target(tuple(any_ofs))


def _expression(el: ET.Element) -> Expression:
    tag = _tag(el)
    if tag == "apply":
        kids, _ = _children(el, {"apply": 1, "attributevalue": 1, "attributedesignator": 1})
        return Apply(_attr(el, "FunctionId"), tuple(_expression(k) for k in kids))
    if tag == "attributevalue":
        return _value(el)
    if tag == "attributedesignator":
        return _designator(el)
    raise GrammarViolation(f"<{tag}> is not a supported expression")


def _rule(el: ET.Element) -> XRule:
    effect = _attr(el, "Effect")
    if effect.lower() not in ("permit", "deny"):
        raise GrammarViolation(f"rule effect must be Permit or Deny, not {effect!r}")
    kids, ignored = _children(el, {"target": 1, "condition": 1})
    target = condition = None
    for k in kids:
        if _tag(k) == "target":
            if target is not None or condition is not None:
                raise GrammarViolation("<Rule> accepts one Target before an optional Condition")
            target = _target(k)
        else:
            if condition is not None:
                raise GrammarViolation("<Rule> accepts at most one Condition")
            body = list(k)
            if len(body) != 1:
                raise GrammarViolation("<Condition> must hold exactly one expression")
            condition = Condition(_expression(body[0]))
    return XRule(_attr(el, "RuleId"), "Permit" if effect.lower() == "permit" else "Deny",
                 target, condition, tuple(ignored))


def _policy(el: ET.Element) -> Policy:
    alg = _attr(el, "RuleCombiningAlgId")
    _check_combiner(alg, policy_set=False)
    kids, ignored = _children(el, {"target": 1, "rule": 1})
    if not kids or _tag(kids[0]) != "target":
        raise GrammarViolation("<Policy> must start with a <Target>")
    rules = tuple(_rule(k) for k in kids[1:] if _tag(k) == "rule")
    if len(rules) != len(kids) - 1:
        raise GrammarViolation("<Policy> accepts a single <Target>")
    if not rules:
        raise GrammarViolation("<Policy> needs at least one <Rule>")
    return Policy(_attr(el, "PolicyId"), _attr(el, "Version", False), alg,
                  _target(kids[0]), rules, tuple(ignored))


def _policy_set(el: ET.Element) -> PolicySet:
    alg = _attr(el, "PolicyCombiningAlgId")
    _check_combiner(alg, policy_set=True)
    kids, ignored = _children(el, {"target": 1, "policy": 1, "policyset": 1})
    if not kids or _tag(kids[0]) != "target":
        raise GrammarViolation("<PolicySet> must start with a <Target>")
    policies = []
    for k in kids[1:]:
        if _tag(k) == "target":
            raise GrammarViolation("<PolicySet> accepts a single <Target>")
        policies.append(_policy(k) if _tag(k) == "policy" else _policy_set(k))
    if not policies:
        raise GrammarViolation("<PolicySet> needs at least one policy")
    return PolicySet(_attr(el, "PolicySetId"), _attr(el, "Version", False), alg,
                     _target(kids[0]), tuple(policies), tuple(ignored))


def parse_xacml(document: Union[str, bytes]) -> XacmlNode:
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise XmlSyntax(f"malformed XML: {exc}") from exc
    tag = _tag(root)
    if tag == "policy":
        return _policy(root)
    if tag == "policyset":
        return _policy_set(root)
    raise GrammarViolation(f"root element must be Policy or PolicySet, not <{root.tag.rsplit('}', 1)[-1]}>")


def parse_file(path) -> XacmlNode:
    with open(path, "rb") as fh:
        return parse_xacml(fh.read())


# ---------------------------------------------------------------------------
# serialization


def _q(name: str) -> str:
    return f"{{{NAMESPACE}}}{name}"


def _put(el: ET.Element, **attrs: str):
    for k, v in attrs.items():
        if v:
            el.set(k, v)


def _write_designator(parent: ET.Element, d: AttributeDesignator):
    el = ET.SubElement(parent, _q("AttributeDesignator"))
    _put(el, AttributeId=d.attribute_id, Category=d.category, DataType=d.data_type,
         MustBePresent=d.must_be_present)


def _write_value(parent: ET.Element, v: AttributeValue):
    el = ET.SubElement(parent, _q("AttributeValue"))
    _put(el, DataType=v.data_type)
    el.text = v.value


def _write_target(parent: ET.Element, target: Target):
    el = ET.SubElement(parent, _q("Target"))
    for any_of in target.any_ofs:
        a = ET.SubElement(el, _q("AnyOf"))
        for all_of in any_of.all_ofs:
            b = ET.SubElement(a, _q("AllOf"))
            for m in all_of.matches:
                me = ET.SubElement(b, _q("Match"), MatchId=m.match_id)
                _write_value(me, m.value)
                _write_designator(me, m.designator)


def _write_expression(parent: ET.Element, e: Expression):
    if isinstance(e, Apply):
        el = ET.SubElement(parent, _q("Apply"), FunctionId=e.function_id)
        for a in e.args:
            _write_expression(el, a)
    elif isinstance(e, AttributeValue):
        _write_value(parent, e)
    else:
        _write_designator(parent, e)


def _write_ignored(parent: ET.Element, names: Iterable[str]):
    for name in names:
        ET.SubElement(parent, _q(name[0].upper() + name[1:]))


def _build(node: XacmlNode) -> ET.Element:
    if isinstance(node, Policy):
        el = ET.Element(_q("Policy"))
        _put(el, PolicyId=node.policy_id, Version=node.version, RuleCombiningAlgId=node.combiner_id)
        _write_target(el, node.target)
        for r in node.rules:
            re_ = ET.SubElement(el, _q("Rule"), RuleId=r.rule_id, Effect=r.effect)
            if r.target is not None:
                _write_target(re_, r.target)
            if r.condition is not None:
                _write_expression(ET.SubElement(re_, _q("Condition")), r.condition.expression)
            _write_ignored(re_, r.ignored)
    else:
        el = ET.Element(_q("PolicySet"))
        _put(el, PolicySetId=node.policy_set_id, Version=node.version,
             PolicyCombiningAlgId=node.combiner_id)
        _write_target(el, node.target)
        for p in node.policies:
            el.append(_build(p))
    _write_ignored(el, node.ignored)
    return el


def to_xml(node: XacmlNode) -> str:
    ET.register_namespace("", NAMESPACE)
    root = _build(node)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


# ---------------------------------------------------------------------------
# schema and translation


def _designators(e: Expression) -> Iterable[AttributeDesignator]:
    if isinstance(e, AttributeDesignator):
        yield e
    elif isinstance(e, Apply):
        for a in e.args:
            yield from _designators(a)


def _collect(node, out: dict[str, set]):
    def see(attr: str, values: Iterable[str] = ()):
        out.setdefault(attr, set()).update(values)

    def target(t: Optional[Target]):
        for m in (t.matches() if t else ()):
            see(m.designator.attribute, [m.value.value])

    def condition(e: Expression):
        if isinstance(e, Apply):
            attrs = [d.attribute for d in _designators(e)]
            values = [a.value for a in e.args if isinstance(a, AttributeValue)]
            for a in e.args:
                if isinstance(a, Apply) and a.function.endswith("-bag"):
                    values += [v.value for v in a.args if isinstance(v, AttributeValue)]
            if len(set(attrs)) == 1 and values:
                see(attrs[0], values)
            for a in e.args:
                if isinstance(a, Apply) and not a.function.endswith("-bag"):
                    condition(a)

    target(node.target)
    if isinstance(node, Policy):
        for r in node.rules:
            target(r.target)
            if r.condition is not None:
                condition(r.condition.expression)
    else:
        for p in node.policies:
            _collect(p, out)


def build_schema(*nodes: XacmlNode) -> AttributeSchema:
    """Joint schema: attributes in order of first mention, domains = mentioned
    values plus the residual value."""
    values: dict[str, set] = {}
    for n in nodes:
        _collect(n, values)
    if not values:
        values = {PLACEHOLDER: set()}
    return AttributeSchema.from_values(values)


def _merge(schema: AttributeSchema, restrictions: Iterable[tuple[str, str]]) -> ConstraintTuple:
    """Each mentioned attribute ranges over all its values mentioned; the rest
    stay unrestricted."""
    allowed: dict[str, set] = {}
    for attr, value in restrictions:
        schema.index(attr)
        allowed.setdefault(attr, set()).add(value if value in schema.domain(attr) else OTHER)
    return schema.tuple_of(allowed)


def target_tuple(target: Optional[Target], schema: AttributeSchema) -> ConstraintTuple:
    if target is None:
        return schema.top()
    pairs = []
    for m in target.matches():
        if m.function not in MATCH_FUNCTIONS:
            raise UnsupportedMatchFunction(f"match function {m.match_id!r} is not supported")
        pairs.append((m.designator.attribute, m.value.value))
    return _merge(schema, pairs)


def _single_attribute(phi: ConstraintTuple) -> Optional[int]:
    """Index of the only restricted slot, -1 when none, None when several."""
    idx = [i for i, (c, (_, d)) in enumerate(zip(phi.components, phi.schema.slots)) if c != d]
    if not idx:
        return -1
    return idx[0] if len(idx) == 1 else None


def condition_tuple(e: Expression, schema: AttributeSchema) -> ConstraintTuple:
    """Translate a condition built from and/or/not over string membership tests."""
    if not isinstance(e, Apply):
        raise UnsupportedMatchFunction("condition must be a function application")
    fn = e.function
    if fn == "and":
        out = schema.top()
        for a in e.args:
            out = out & condition_tuple(a, schema)
        return out
    if fn == "or":
        parts = [condition_tuple(a, schema) for a in e.args]
        slots = {_single_attribute(p) for p in parts if not p.is_bottom} - {-1}
        if any(_single_attribute(p) == -1 for p in parts):
            return schema.top()
        if None in slots or len(slots) > 1:
            raise UnsupportedMatchFunction("'or' is only supported over a single attribute")
        out = schema.bottom()
        for p in parts:
            out = out | p
        if out.is_bottom:
            return out
        i = next(iter(slots))
        comps = [d for _, d in schema.slots]
        comps[i] = out.components[i]
        return ConstraintTuple(schema, tuple(comps))
    if fn == "not":
        if len(e.args) != 1:
            raise UnsupportedMatchFunction("'not' takes exactly one argument")
        inner = condition_tuple(e.args[0], schema)
        i = _single_attribute(inner)
        if inner.is_bottom:
            return schema.top()
        if i == -1:
            return schema.bottom()
        if i is None:
            raise UnsupportedMatchFunction("'not' is only supported over a single attribute")
        comps = [d for _, d in schema.slots]
        comps[i] = schema.domain(i) - inner.components[i]
        return ConstraintTuple(schema, tuple(comps))
    if fn in MATCH_FUNCTIONS or fn in ("string-is-in", "string-at-least-one-member-of"):
        values, designators = [], []
        for a in e.args:
            if isinstance(a, AttributeValue):
                values.append(a.value)
            elif isinstance(a, AttributeDesignator):
                designators.append(a)
            elif a.function.endswith("-one-and-only") and len(a.args) == 1 \
                    and isinstance(a.args[0], AttributeDesignator):
                designators.append(a.args[0])
            elif a.function.endswith("-bag") and all(isinstance(v, AttributeValue) for v in a.args):
                values += [v.value for v in a.args]
            else:
                raise UnsupportedMatchFunction(f"unsupported argument to {fn}")
        if len(designators) != 1 or not values:
            raise UnsupportedMatchFunction(f"{fn} needs one attribute and literal values")
        return _merge(schema, [(designators[0].attribute, v) for v in values])
    raise UnsupportedMatchFunction(f"function {e.function_id!r} is not supported in conditions")


def encode_combiner(alg: str, terms: list, literal: bool = False) -> PolicyTerm:
    """SePL term for a combining algorithm over `terms`.

    deny-unless-permit and permit-unless-deny assert the override chain and
    then fall back to 0 / 1 through a sequence step, so an indeterminate
    chain also ends in the default. With literal=True they are the bare asserted
    chains instead, which leave unmatched requests NotApplicable, and
    only-one-applicable joins the other operands of each ⊖ by +.
    """
    if not terms:
        raise ValueError("a combining algorithm needs at least one operand")
    if alg == "permit-overrides":
        return chain(PermitOv, terms)
    if alg == "deny-overrides":
        return chain(DenyOv, terms)
    if alg == "first-applicable":
        return chain(Seq, terms)
    if alg == "deny-unless-permit":
        body = Assert(chain(PermitOv, terms))
        return body if literal else Seq(body, DenyAll())
    if alg == "permit-unless-deny":
        body = Assert(chain(DenyOv, terms))
        return body if literal else Seq(body, PermitAll())
    if alg == "only-one-applicable":
        if len(terms) == 1:
            return terms[0]
        # the others are joined by ⌊⌊ so that opposite effects do not cancel
        # and hide an applicable rule; literal=True keeps the + chain
        inner = Choice if literal else PermitOv
        parts = [OMinus(p, chain(inner, terms[:j] + terms[j + 1:])) for j, p in enumerate(terms)]
        return chain(Choice, parts)
    if alg == "ordered-permit-overrides":
        raise UnsupportedCombiner("ordered-permit-overrides has no SePL encoding")
    raise UnknownCombiner(f"unknown combining algorithm {alg!r}")


def _raw(node, schema: AttributeSchema, literal: bool = False) -> PolicyTerm:
    scope = target_tuple(node.target, schema)
    if isinstance(node, Policy):
        parts = []
        for r in node.rules:
            phi = target_tuple(r.target, schema)
            if r.condition is not None:
                phi = phi & condition_tuple(r.condition.expression, schema)
            parts.append(Effect(phi, r.effect == "Permit"))
    else:
        parts = [_raw(p, schema, literal) for p in node.policies]
    body = encode_combiner(node.combiner, parts, literal)
    return body if scope.is_top else Scoped(scope, body)


def to_sepl(node: XacmlNode, schema: AttributeSchema, expand: bool = True,
            literal: bool = False) -> PolicyTerm:
    """⌈node⌉; with expand=False the φ:P and φ→e forms are kept."""
    term = _raw(node, schema, literal)
    return expand_abbreviations(term) if expand else term


@dataclass
class Translation:
    """Two documents over their joint schema."""

    nodes: tuple
    schema: AttributeSchema
    terms: tuple = field(default=())


def translate(*nodes: XacmlNode) -> Translation:
    schema = build_schema(*nodes)
    return Translation(nodes, schema, tuple(to_sepl(n, schema) for n in nodes))
