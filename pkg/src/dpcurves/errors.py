"""Exception hierarchy.

Anything deriving from :class:`ValidationError` is a user/input problem (CLI
exit code 1).  :class:`InternalConsistencyError` means an identity that must
hold on a correct build was violated (CLI exit code 2).
"""


class ValidationError(ValueError):
    pass


class NotDelPezzoError(ValidationError):
    pass


class RankMismatchError(ValidationError):
    pass


class UnsupportedSurfaceError(ValidationError):
    pass


class SurfaceMismatchError(ValidationError):
    pass


class CacheFormatError(ValidationError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class CacheVersionError(CacheFormatError):
    pass


class InternalConsistencyError(RuntimeError):
    pass
