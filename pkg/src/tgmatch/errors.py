"""Exception types shared across the engine."""


class TgmatchError(Exception):
    """Base class for all engine errors."""

    code = "Error"


class MissingHeader(TgmatchError):
    code = "MissingHeader"


class BadField(TgmatchError):
    code = "BadField"

    def __init__(self, line: int, column: str, detail: str = ""):
        self.line = line
        self.column = column
        msg = f"bad field '{column}' on line {line}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnknownChannel(TgmatchError):
    code = "UnknownChannel"

    def __init__(self, channel: str, line: int | None = None):
        self.channel = channel
        self.line = line
        where = f" on line {line}" if line is not None else ""
        super().__init__(f"channel '{channel}' is not in the registry{where}")


class UnknownNode(TgmatchError):
    code = "UnknownNode"

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} does not exist in this graph")


class InvalidRange(TgmatchError):
    code = "InvalidRange"


class NonPositiveBinWidth(TgmatchError):
    code = "NonPositiveBinWidth"


class NotAPerson(TgmatchError):
    code = "NotAPerson"

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} does not have kind Person")


class NoVisibleEdges(TgmatchError):
    code = "NoVisibleEdges"


class EmptyMapping(TgmatchError):
    code = "EmptyMapping"


class NotInjective(TgmatchError):
    code = "NotInjective"


class KindMismatch(TgmatchError):
    code = "KindMismatch"


class AlreadyMatched(TgmatchError):
    code = "AlreadyMatched"


class TargetTaken(TgmatchError):
    code = "TargetTaken"


class UnknownPair(TgmatchError):
    code = "UnknownPair"


class DanglingNodeRefWarning(UserWarning):
    """A nodes CSV row that references no edge and declares no kind."""
