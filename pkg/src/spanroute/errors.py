"""Exception hierarchy for spanroute."""


class SpanrouteError(Exception):
    """Base class for every error raised by this package."""


# graph model
class NetworkError(SpanrouteError, ValueError):
    pass


class DuplicateEdgeId(NetworkError):
    pass


class UnknownVertex(NetworkError):
    pass


class NoPathExists(NetworkError):
    pass


class EdgeOffAllPaths(NetworkError):
    pass


class PathExplosion(NetworkError):
    pass


class DimensionMismatch(SpanrouteError, ValueError):
    pass


# spanner
class RankDeficient(SpanrouteError, ValueError):
    pass


class NonConvergence(SpanrouteError, RuntimeError):
    pass


class OutOfSpan(SpanrouteError, ValueError):
    pass


# cost models
class HeavyTailed(SpanrouteError, ValueError):
    pass


# policies
class ColdStart(SpanrouteError, RuntimeError):
    pass


class InvalidB(SpanrouteError, ValueError):
    pass


class InvalidC(SpanrouteError, ValueError):
    pass


# scenario files
class ScenarioError(SpanrouteError, ValueError):
    pass


class ParseError(ScenarioError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownPolicy(ScenarioError):
    pass


class MissingField(ScenarioError):
    pass


class InvalidParam(ScenarioError):
    pass
