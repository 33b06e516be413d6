"""Exception hierarchy shared by all fillscope modules."""


class FillscopeError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetMismatchError(FillscopeError):
    """A word, symbol or letter map was used against the wrong alphabet."""


class ParameterError(FillscopeError):
    """Invalid parameters for a presentation family or construction."""


class WordSyntaxError(FillscopeError):
    """Malformed word or presentation text."""


class InvalidDiagramError(FillscopeError):
    """An operation required a valid diagram and the validator refused it."""


class SchemeError(FillscopeError):
    """A conjugate scheme whose product is not freely equal to its target."""


class SurgeryError(FillscopeError):
    """A diagram surgery was attempted at an ineligible locus."""


class PlanarityHazardError(SurgeryError):
    """A cut/glue operation that would destroy planarity (collapse advice included)."""


class AmalgamStructureError(SurgeryError):
    """An island boundary violated the amalgam structure (not reducible to empty)."""


class RetractionError(FillscopeError):
    """A letter map failed the relator condition required of a retraction."""


class ResourceBudgetError(FillscopeError):
    """A search or construction exceeded its configured budget."""

    def __init__(self, message: str, reached: int | None = None):
        super().__init__(message)
        self.reached = reached
