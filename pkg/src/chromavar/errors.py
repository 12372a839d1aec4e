"""Exception hierarchy shared by every module."""


class ChromavarError(Exception):
    """Base class for all library errors."""


class InputError(ChromavarError, ValueError):
    """Malformed or inconsistent input data."""


class CapExceededError(ChromavarError):
    """An enumeration would exceed a configured cap.

    Caps are never applied silently: the computation stops instead of
    returning a partial answer.
    """

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InternalConsistencyError(ChromavarError, RuntimeError):
    """A construction failed a self-check that should be impossible."""
