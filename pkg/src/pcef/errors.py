"""Exception types raised across the package."""


class PCEFError(Exception):
    """Base class for every error raised by :mod:`pcef`."""


class DataError(PCEFError, ValueError):
    """Input data cannot be turned into a valid analysis (CLI exit code 2)."""


class MalformedRow(DataError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class TimestampParseError(DataError):
    def __init__(self, line: int, raw: str, pattern: str = ""):
        self.line = line
        self.raw = raw
        hint = f" (pattern {pattern!r})" if pattern else ""
        super().__init__(f"line {line}: cannot parse timestamp {raw!r}{hint}")


class EmptyLog(DataError):
    def __init__(self, message: str = "event log contains no events"):
        super().__init__(message)


class XmlError(DataError):
    pass


class MissingKey(DataError):
    def __init__(self, case_index: int, key: str):
        self.case_index = case_index
        self.key = key
        super().__init__(f"trace #{case_index}: event lacks required key {key!r}")


class ReservedLabel(DataError):
    pass


class UnknownActivity(DataError, LookupError):
    def __init__(self, activity: str):
        self.activity = activity
        super().__init__(f"activity {activity!r} does not occur in the log")


class ZeroTotal(DataError):
    pass


class InvalidFraction(PCEFError, ValueError):
    pass


class UnknownCriterion(PCEFError, LookupError):
    def __init__(self, criterion_id: str):
        self.criterion_id = criterion_id
        super().__init__(f"unknown or non-external criterion {criterion_id!r}")


class IncompleteResults(DataError):
    pass


class AllWeightsZero(PCEFError, ValueError):
    pass


class InvalidSpec(PCEFError, ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigError(PCEFError, ValueError):
    pass
