# === errors.py ===


class WorkbenchError(Exception):
    pass


class WindowError(WorkbenchError):
    """A computation needed a weight outside the truncation window."""

    def __init__(self, weight, hint=""):
        self.weight = weight
        self.hint = hint
        text = f"weight {tuple(weight)} is outside the window"
        if hint:
            text += f" ({hint})"
        super().__init__(text)


class BlockError(WorkbenchError, ValueError):
    pass


class MismatchError(WorkbenchError, ValueError):
    pass


class PresentationError(WorkbenchError, ValueError):
    pass


class VerificationError(WorkbenchError):
    pass
