"""Exception hierarchy shared by all modules."""


class CSAError(Exception):
    """Base class for every error raised by the engine."""


# fields
class CharDividesOrder(CSAError):
    pass


class DuplicateVariable(CSAError):
    pass


class ZeroInput(CSAError):
    pass


class NonzeroValuation(CSAError):
    pass


class MissingRootOfUnity(CSAError):
    pass


# algebra
class ParentMismatch(CSAError):
    pass


class FieldMismatch(CSAError):
    pass


class NotInvertible(CSAError):
    """The element is a zero divisor."""


class NotCentralSimple(CSAError):
    pass


class DimensionMismatch(CSAError):
    pass


# symbols
class NotCyclic(CSAError):
    pass


class NotAField(CSAError):
    """x_i^{n_i} - b_i is reducible over the partial tower."""


# armature
class NotScalar(CSAError):
    """A commutator fell outside F.1, so the subgroup is not abelian mod F^x."""


class DegenerateForm(CSAError):
    pass


class NotIsotropic(CSAError):
    pass


class NotIndependent(CSAError):
    pass


class DegenerateRadical(CSAError):
    pass


# crossed
class NoInvertibleSolution(CSAError):
    def __init__(self, msg, solution_basis=None):
        super().__init__(msg)
        self.solution_basis = solution_basis or []


class ZeroElement(CSAError):
    pass


class NotIsometric(CSAError):
    pass


class KumNotContained(CSAError):
    pass


class KumNotIsotropic(CSAError):
    pass


class ScaleExceeded(CSAError):
    pass


# sqcentral
class NotSquareCentral(CSAError):
    pass


class NotSplitPresentation(CSAError):
    pass


class WrongCharacteristic(CSAError):
    pass


class UnknownIndex(CSAError):
    pass


class BudgetExhausted(CSAError):
    pass


class NotAWitness(CSAError):
    pass


# cli
class ParseError(CSAError):
    def __init__(self, msg, position=None):
        if position is not None:
            msg = f"{msg} (at {position})"
        super().__init__(msg)
        self.position = position


class TaskError(CSAError):
    pass


class BadReport(CSAError):
    pass
