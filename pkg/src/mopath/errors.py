"""Exception hierarchy shared by all modules."""


class BenchmarkError(Exception):
    """Base class for every error raised by :mod:`mopath`."""


class MalformedName(BenchmarkError, ValueError):
    pass


class OutOfBounds(BenchmarkError, IndexError):
    pass


class GraphFormatError(BenchmarkError, ValueError):
    """Base for problems found while reading a graph document."""


class ParseError(GraphFormatError):
    pass


class MissingAttribute(GraphFormatError):
    pass


class UnknownNodeRef(GraphFormatError):
    pass


class CyclicGraph(BenchmarkError, ValueError):
    pass


class Unreachable(BenchmarkError):
    """The end node cannot be reached from the start node."""


class NonPositiveVelocity(BenchmarkError, ValueError):
    pass


class DimensionMismatch(BenchmarkError, ValueError):
    pass


class EmptySet(BenchmarkError, ValueError):
    pass


class InvalidConfig(BenchmarkError, ValueError):
    pass
