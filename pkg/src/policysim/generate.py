"""Random XACML policies for tests and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from pathlib import Path

from .xacml import (
    AllOf, AnyOf, AttributeDesignator, AttributeValue, Match, Policy, Target, XRule, to_xml,
)

STRING = "http://www.w3.org/2001/XMLSchema#string"
BASE_ATTRIBUTES = (
    ("subject-id", "urn:oasis:names:tc:xacml:1.0:subject:subject-id",
     "urn:oasis:names:tc:xacml:1.0:subject-category:access-subject"),
    ("resource-id", "urn:oasis:names:tc:xacml:1.0:resource:resource-id",
     "urn:oasis:names:tc:xacml:3.0:attribute-category:resource"),
    ("action-id", "urn:oasis:names:tc:xacml:1.0:action:action-id",
     "urn:oasis:names:tc:xacml:3.0:attribute-category:action"),
)
RULE_COMBINERS = ("first-applicable", "permit-overrides", "deny-overrides",
                  "deny-unless-permit", "permit-unless-deny")


@dataclass(frozen=True)
class GenConfig:
    rule_count: int = 4
    attribute_count: int = 3
    values_per_attribute: int = 3
    permit_ratio: float = 0.5
    combiner: str = "first-applicable"
    seed: int = 0

    def __post_init__(self):
        if self.rule_count < 1:
            raise ValueError("rule_count must be at least 1")
        if self.attribute_count < 1:
            raise ValueError("attribute_count must be at least 1")
        if self.values_per_attribute < 2:
            raise ValueError("values_per_attribute must be at least 2")
        if not 0.0 <= self.permit_ratio <= 1.0:
            raise ValueError("permit_ratio must lie in [0, 1]")
        if self.combiner not in RULE_COMBINERS:
            raise ValueError(f"unsupported rule combiner {self.combiner!r}")


def attribute(i: int) -> tuple[str, str, str]:
    """(short name, AttributeId, Category) of the i-th generated attribute."""
    if i < len(BASE_ATTRIBUTES):
        return BASE_ATTRIBUTES[i]
    name = f"env-attr-{i}"
    return name, f"urn:example:attribute:{name}", "urn:oasis:names:tc:xacml:3.0:attribute-category:environment"


def value_pool(cfg: GenConfig, i: int) -> list[str]:
    short = attribute(i)[0].split("-")[0]
    return [f"{short}{j}" for j in range(cfg.values_per_attribute)]


def _match(i: int, value: str) -> Match:
    _, attr_id, category = attribute(i)
    return Match("urn:oasis:names:tc:xacml:1.0:function:string-equal",
                 AttributeValue(value, STRING),
                 AttributeDesignator(attr_id, category, STRING, "false"))


def random_target(rng: random.Random, cfg: GenConfig) -> Target:
    k = rng.randint(1, cfg.attribute_count)
    any_ofs = []
    for i in sorted(rng.sample(range(cfg.attribute_count), k)):
        pool = value_pool(cfg, i)
        chosen = sorted(rng.sample(pool, rng.randint(1, max(1, len(pool) - 1))))
        any_ofs.append(AnyOf((AllOf(tuple(_match(i, v) for v in chosen)),)))
    return Target(tuple(any_ofs))


def random_rule(rng: random.Random, cfg: GenConfig, n: int) -> XRule:
    effect = "Permit" if rng.random() < cfg.permit_ratio else "Deny"
    return XRule(f"urn:example:rule:{n}", effect, random_target(rng, cfg))


def random_policy(cfg: GenConfig, rng: random.Random | None = None, name: str = "p") -> Policy:
    rng = rng or random.Random(cfg.seed)
    rules = tuple(random_rule(rng, cfg, n) for n in range(cfg.rule_count))
    return Policy(f"urn:example:policy:{name}", "1.0",
                  f"urn:oasis:names:tc:xacml:3.0:rule-combining-algorithm:{cfg.combiner}",
                  Target(), rules)


def mutate(policy: Policy, rng: random.Random, cfg: GenConfig) -> Policy:
    """One random edit: flip an effect, replace a target, or swap two rules."""
    rules = list(policy.rules)
    i = rng.randrange(len(rules))
    choice = rng.randrange(3)
    if choice == 0:
        r = rules[i]
        rules[i] = replace(r, effect="Deny" if r.effect == "Permit" else "Permit")
    elif choice == 1:
        rules[i] = replace(rules[i], target=random_target(rng, cfg))
    elif len(rules) > 1:
        j = rng.randrange(len(rules))
        rules[i], rules[j] = rules[j], rules[i]
    return replace(policy, rules=tuple(rules))


def generate(cfg: GenConfig, out_dir, count: int = 1) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(cfg.seed)
    paths = []
    for k in range(count):
        path = out / f"policy-{cfg.seed}-{k}.xml"
        path.write_text(to_xml(random_policy(cfg, rng, name=f"{cfg.seed}-{k}")), encoding="utf-8")
        paths.append(path)
    return paths
