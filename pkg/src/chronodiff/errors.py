"""Exception types shared across the package."""


class ChronodiffError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- ingest -----------------------------------------------------------------

class MalformedWarc(ChronodiffError):
    pass


class UnsupportedCompression(ChronodiffError):
    pass


class InvalidUrl(ChronodiffError):
    pass


class InvalidDatetime(ChronodiffError):
    pass


# -- chains / index ---------------------------------------------------------

class MixedUrls(ChronodiffError):
    pass


class DuplicateChainId(ChronodiffError):
    pass


class UnknownField(ChronodiffError):
    pass


class CorruptIndex(ChronodiffError):
    pass


class VersionMismatch(ChronodiffError):
    pass


# -- queries ----------------------------------------------------------------

class EmptyQuery(ChronodiffError):
    pass


class PhraseTooShort(ChronodiffError):
    pass


class InvalidQuery(ChronodiffError):
    pass


# -- diff / animation -------------------------------------------------------

class EmptyDocuments(ChronodiffError):
    pass


# -- memento tooling --------------------------------------------------------

class MalformedLinkFormat(ChronodiffError):
    pass


class NoChange(ChronodiffError):
    pass


# -- service / replay -------------------------------------------------------

class EmptyChain(ChronodiffError):
    pass


class UnknownUrl(ChronodiffError):
    pass


class UnknownVersion(ChronodiffError):
    pass
