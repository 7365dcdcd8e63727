"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so that callers (and
the command line front end) can react without parsing messages.
"""


class FlowTypeError(Exception):
    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        return f"{self.code}: {self.args[0]}"


class NetworkError(FlowTypeError):
    code = "malformed-network"


class FlowError(FlowTypeError):
    code = "bad-flow"


class SyntaxFault(FlowTypeError):
    code = "syntax-error"


class DesugarError(FlowTypeError):
    code = "bad-theta"


class LpError(FlowTypeError):
    code = "lp-error"


class UnboundedDirection(LpError):
    code = "unbounded-direction"


class DimensionCapExceeded(FlowTypeError):
    code = "dimension-cap"


class TypingError(FlowTypeError):
    code = "typing-error"


class DeriveError(FlowTypeError):
    code = "derive-error"


class UnsafeSpecification(FlowTypeError):
    """Raised when a derivation hits an empty polytope.

    ``node`` is the offending constructor, ``span`` its source position
    (if known) and ``derivation`` the partial tree built so far.
    """

    code = "unsafe"

    def __init__(self, message, node=None, span=None, derivation=None):
        super().__init__(message)
        self.node = node
        self.span = span
        self.derivation = derivation


class ObjectiveError(FlowTypeError):
    code = "objective-error"
