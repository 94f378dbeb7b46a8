"""Exception hierarchy shared by the library and the CLI."""


class CyclonumError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(CyclonumError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimitError(CyclonumError):
    """A configured size bound would be exceeded."""

    def __init__(self, bound_name: str, bound: int, requested: int):
        self.bound_name = bound_name
        self.bound = bound
        self.requested = requested
        super().__init__(
            f"{bound_name} exceeded: requested {requested}, limit {bound}"
        )


class UnsupportedCaseError(CyclonumError):
    """The inputs fall in a case the statement does not cover (e.g. p = 2)."""


class CounterexampleError(CyclonumError):
    """A premise-true theorem record failed its conclusion."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"counterexample at p={report.p} n={report.n} e={report.e} k={report.k}"
        )
