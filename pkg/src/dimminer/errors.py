"""Exception types shared across the package.

Every error carries a short machine-parsable ``code`` used by the CLI
(`error: <code>: <message>` on stderr) and the HTTP service
(`{"code": ..., "message": ...}` bodies).
"""


class DimminerError(Exception):
    code = "error"


class ConfigError(DimminerError):
    code = "config"


class LexiconError(DimminerError):
    code = "lexicon"


class DegenerateCorpusError(DimminerError):
    code = "degenerate-corpus"


class DegenerateGraphError(DimminerError):
    code = "degenerate-graph"


class DegenerateDataError(DimminerError):
    code = "degenerate-data"


class TooFewDocumentsError(DimminerError):
    code = "too-few-documents"


class SingleClassError(DimminerError):
    code = "single-class"


class ConvergenceError(DimminerError):
    """Iterative solver ran out of iterations; carries the worst residual seen."""

    code = "no-convergence"

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class UndefinedNCutError(DimminerError):
    code = "undefined-ncut"


class MetricError(DimminerError):
    code = "metric"


class SessionError(DimminerError):
    code = "session"
