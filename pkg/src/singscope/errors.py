"""Exception hierarchy. Every error carries the tag of the module that raised it."""


class SingscopeError(Exception):
    module = "singscope"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"[{self.module}] {self.message}"


class ParseError(SingscopeError):
    module = "poly-core"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class SeriesValidityError(SingscopeError):
    """A coefficient or operation needs terms beyond the certified order."""

    module = "poly-core"


class PreconditionError(SingscopeError):
    module = "poly-core"


class GeometryError(SingscopeError):
    module = "newton-geometry"


class ClassificationError(SingscopeError):
    module = "classify"


class LegendreError(SingscopeError):
    module = "legendre"


class PuiseuxError(SingscopeError):
    module = "puiseux-resolve"


class ExponentError(SingscopeError):
    module = "exponent-book"


class VerificationError(SingscopeError):
    module = "geo-verify"
