"""Exception hierarchy shared by all wuglabels modules."""


class WuglabelsError(Exception):
    """Base class for every error raised by this package."""


# --- graph loading / validation ---

class GraphValidationError(WuglabelsError):
    pass


class MissingColumn(GraphValidationError):
    pass


class DanglingReference(GraphValidationError):
    pass


class DuplicateUsageId(GraphValidationError):
    pass


class InvalidGraph(GraphValidationError):
    pass


# --- definition datasets ---

class EmptyField(WuglabelsError):
    pass


class UnknownSplit(WuglabelsError):
    pass


class UndefinedRatio(WuglabelsError):
    pass


# --- lexicon ---

class DuplicateSenseId(WuglabelsError):
    pass


class EmptyLexicon(WuglabelsError):
    pass


# --- embeddings ---

class ProviderUnavailable(WuglabelsError):
    pass


class EmptyText(WuglabelsError):
    pass


class ZeroVector(WuglabelsError):
    pass


class DimMismatch(WuglabelsError):
    pass


class EmptyInput(WuglabelsError):
    pass


# --- labelers ---

class LemmaNotInLexicon(WuglabelsError):
    pass


class NoJudgedPairs(WuglabelsError):
    pass


class GeneratorUnavailable(WuglabelsError):
    pass


class MissingPregenerated(WuglabelsError):
    pass


class EmptyGeneration(WuglabelsError):
    pass


class InvalidTemplate(WuglabelsError):
    pass


# --- metrics ---

class InsufficientData(WuglabelsError):
    pass


class EmptySet(WuglabelsError):
    pass


# --- evaluation / service ---

class UnknownItem(WuglabelsError):
    pass


class DuplicateRecord(WuglabelsError):
    pass


class ConfigInvalid(WuglabelsError):
    pass


class PortBusy(WuglabelsError):
    pass
