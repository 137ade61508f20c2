"""Exception hierarchy shared by all modules."""


class TasepBurgersError(Exception):
    pass


class InvalidDomainError(TasepBurgersError, ValueError):
    pass


class InvalidConfigError(TasepBurgersError, ValueError):
    pass


class InconsistentConfigError(InvalidConfigError):
    """Raised when an ABDF configuration cannot be inverted to a TASEP one."""


class TimeRangeError(TasepBurgersError, ValueError):
    pass


class ReconstructionError(TasepBurgersError, ValueError):
    pass


class AmbiguousVacuumError(ReconstructionError):
    """The profile is identically zero and carries no +4 jump, so the
    alternation flag of the empty ABDF configuration cannot be read off."""


class VerificationError(TasepBurgersError, AssertionError):
    pass


class SupportError(TasepBurgersError, ValueError):
    """Test function support leaves the covered space-time box."""
