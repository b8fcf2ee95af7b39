"""Exception types shared across the package."""


class InputValidationError(ValueError):
    """Raised when an input violates a documented precondition or schema."""


class MissingPhrasesError(LookupError):
    """Raised when a phrase store lacks vectors for aligned span surfaces.

    Carries the full sorted list of missing surfaces so a caller can
    re-export exactly the phrases that are needed.
    """

    def __init__(self, surfaces):
        self.surfaces = sorted(set(surfaces))
        super().__init__(f"{len(self.surfaces)} phrase(s) missing from store")
