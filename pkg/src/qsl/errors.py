"""Error taxonomy shared by the library and the command line tool.

Every error carries a stable machine-readable ``code`` so that reports and
exit statuses stay scriptable.
"""


class QslError(Exception):
    """Base class; ``code`` is a stable identifier, ``message`` is for humans."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class InputError(QslError):
    """Malformed external input (bad file, bad schema, bad flag value)."""


class DomainError(QslError):
    """Well-formed input that violates a mathematical precondition."""
