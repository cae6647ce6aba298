"""Exception hierarchy shared by every polypack module."""


class PolypackError(Exception):
    """Base class for all errors raised by polypack."""


class EmptyInput(PolypackError, ValueError):
    pass


class ValueOutOfRange(PolypackError, ValueError):
    pass


class DegenerateBase(PolypackError, ValueError):
    """The base cannot be packed (B < 2, or B too large for one word)."""


class InvalidSpec(PolypackError, ValueError):
    pass


class CorruptStream(PolypackError, ValueError):
    """Packed data is inconsistent with its parameters."""


class NotAContainer(CorruptStream):
    pass


class UnsupportedVersion(CorruptStream):
    pass


class RoundTripMismatch(PolypackError):
    """Decompressed output differs from the original input."""


class PostStageFailed(PolypackError):
    """An external filter process exited with a nonzero status."""

    def __init__(self, command, returncode, stderr=b""):
        self.command = command
        self.returncode = returncode
        self.stderr = stderr
        detail = stderr.decode(errors="replace").strip()
        msg = f"filter {command!r} exited with status {returncode}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
