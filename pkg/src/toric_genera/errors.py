class ToricGeneraError(Exception):
    pass


class ContractError(ToricGeneraError, ValueError):
    """Operands violate an operation's preconditions (variables, orders, shapes)."""


class NotAUnit(ToricGeneraError, ArithmeticError):
    pass


class InvalidExponent(ToricGeneraError, ValueError):
    pass


class OrderError(ToricGeneraError, ValueError):
    pass


class SpecError(ToricGeneraError, ValueError):
    pass


class ValidationError(ToricGeneraError, ValueError):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class GenericityError(ToricGeneraError, RuntimeError):
    pass


class InternalInconsistency(ToricGeneraError, RuntimeError):
    pass


class StructureError(ToricGeneraError, RuntimeError):
    pass


class DivisibilityError(ToricGeneraError, ArithmeticError):
    pass
