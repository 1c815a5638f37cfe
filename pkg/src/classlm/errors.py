"""Exception hierarchy.

Everything user-data related derives from :class:`DataError` so the CLI can
map it to exit code 1; argparse handles usage errors (exit code 2).
"""


class DataError(Exception):
    """Invalid input data (corpus, lexicon, grammar, table, or model file)."""


class LexiconError(DataError):
    pass


class CorpusError(DataError):
    pass


class TableError(DataError):
    pass


class GrammarError(DataError):
    pass


class ModelError(DataError):
    pass
