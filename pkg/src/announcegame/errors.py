"""Exception types shared across the package."""


class AssumptionViolated(ValueError):
    """A game parameter invariant does not hold.

    ``name`` is a stable identifier of the failed check (``deltaS_le_T``,
    ``Z_le_B``, ``fraction_out_of_range:delta``, ...).
    """

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        self.detail = detail
        super().__init__(f"{name}: {detail}" if detail else name)


class InvalidProfile(ValueError):
    pass


class BlindChallengeUnsupported(ValueError):
    pass


class DegenerateA(ValueError):
    pass


class NegativeDenominator(ArithmeticError):
    pass


class NegativeBeta(ArithmeticError):
    pass


class Infeasible(Exception):
    """An equilibrium candidate violates one of its existence conditions."""

    def __init__(self, condition: str, slack: float, detail: str = ""):
        self.condition = condition
        self.slack = slack
        msg = f"{condition} violated (slack={slack:.6g})"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class BadGroupSizes(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class NoAdmissibleRoot(ValueError):
    pass


class SingularDenominator(ZeroDivisionError):
    pass
