"""Exception hierarchy shared by every module."""


class DegenSpinorError(Exception):
    """Base class for all errors raised by this package."""


# geometry

class NearSingularAngle(DegenSpinorError, ValueError):
    pass


class NonRealEvent(DegenSpinorError, ValueError):
    pass


class SingularMatrix(DegenSpinorError, ValueError):
    pass


# expression language

class ExprError(DegenSpinorError):
    """Anything wrong with a user expression (parse or evaluation)."""


class ExprParseError(ExprError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


class ExprSyntaxError(ExprParseError):
    pass


class UnknownIdentifier(ExprParseError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class ArityError(ExprParseError):
    pass


class UnboundVariable(ExprError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class NonAnalyticNode(ExprError):
    pass


class NoConvergence(ExprError):
    pass


# physics

class GeneratorError(DegenSpinorError, ValueError):
    """A generating function or constant violates its slot contract."""


class DegeneracyConditionViolated(DegenSpinorError):
    pass


class ZeroSpinor(DegenSpinorError, ValueError):
    pass


class NonRealSpin(DegenSpinorError):
    pass


class NonRealPotential(DegenSpinorError):
    pass


class ComplexKUnsupported(DegenSpinorError):
    pass


class BelowNoiseFloor(DegenSpinorError):
    pass


# front end

class ConfigError(DegenSpinorError):
    pass


class VerificationFailure(DegenSpinorError):
    pass
