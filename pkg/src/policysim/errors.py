"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class PolicyError(Exception):
    exit_code = 1


# parse / grammar
class XmlSyntax(PolicyError):
    exit_code = 2


class GrammarViolation(PolicyError):
    exit_code = 2


class UnknownCombiner(PolicyError):
    exit_code = 2


# transform
class SchemaMismatch(PolicyError):
    exit_code = 3


class UnboundAttribute(PolicyError):
    exit_code = 3


class UnsupportedMatchFunction(PolicyError):
    exit_code = 3


class UnsupportedCombiner(PolicyError):
    exit_code = 3


class ScopeOnUnsupportedOperator(PolicyError):
    exit_code = 3


# prover
class ArityMismatch(PolicyError):
    exit_code = 4


class IndeterminateUnsupported(PolicyError):
    exit_code = 4


class InternalInconsistency(PolicyError):
    exit_code = 4
