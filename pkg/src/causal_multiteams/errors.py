"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CausalTeamError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CausalTeamError):
    """A model, function component or distribution is structurally invalid."""


class CompatibilityViolation(ValidationError):
    def __init__(self, assignment: dict[str, str], variable: str, expected: str):
        self.assignment = assignment
        self.variable = variable
        self.expected = expected
        super().__init__(
            f"row {assignment} violates the law for {variable}: "
            f"expected {variable}={expected}"
        )


class ConstantFunction(ValidationError):
    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"the causal function for {variable} is constant")


class CyclicGraph(ValidationError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("causal graph is cyclic: " + " -> ".join(cycle))


class RangeError(ValidationError):
    def __init__(self, variable: str, value: object):
        self.variable = variable
        self.value = value
        super().__init__(f"value {value!r} is not in the range of {variable}")


class UnknownVariable(ValidationError):
    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"unknown variable {variable!r}")


class SignatureMismatch(ValidationError):
    pass


class NonNumericValue(ValidationError):
    def __init__(self, variable: str, value: str):
        self.variable = variable
        self.value = value
        super().__init__(f"value {value!r} of {variable} is not a decimal number")


class InconsistentIntervention(CausalTeamError):
    pass


class EmptyModel(CausalTeamError):
    """A probability was requested on a causal multiteam with no rows."""


class FormulaSyntaxError(CausalTeamError):
    """Raised by the parser; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = "", expected: str = ""):
        self.position = position
        self.text = text
        self.expected = expected
        self.message = message
        super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        """Two-line rendering of the source with a caret under the offending column."""
        return f"{self.text}\n{' ' * self.position}^"


class UnknownFormulaVariable(FormulaSyntaxError):
    """A formula mentions a variable outside the signature it is parsed against."""


class ValueNotInRange(FormulaSyntaxError):
    """A formula mentions a value outside its variable's range."""


class SignatureRequired(CausalTeamError):
    pass


class UnsupportedNode(CausalTeamError):
    pass


class NotRescalings(CausalTeamError):
    pass


class EmptyClass(CausalTeamError):
    pass


class BudgetExceeded(CausalTeamError):
    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"enumeration of about {estimate} models exceeds the cap of {cap}")
