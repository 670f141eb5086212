"""Exception hierarchy. ``exit_code`` is what the CLI returns for each error."""


class SegRdError(Exception):
    exit_code = 3


class UsageError(SegRdError):
    exit_code = 1


class FormatError(SegRdError):
    exit_code = 2


class IoError(FormatError):
    """Missing or unreadable file."""


class MalformedScan(FormatError):
    pass


class LabelCountMismatch(FormatError):
    pass


class EmptyCloud(FormatError):
    pass


class LengthMismatch(SegRdError):
    pass


class NegativeAlpha(UsageError, ValueError):
    pass


class InvalidQs(UsageError, ValueError):
    pass


class ZeroFrames(UsageError, ValueError):
    pass


class EmptyInput(FormatError):
    pass
