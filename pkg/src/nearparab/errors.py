"""Exception taxonomy shared by the whole library.

Every error carries a machine-readable payload so the CLI can emit a
structured JSON error object on stderr.
"""


class NearParabError(Exception):
    """Base class for all domain errors raised by this package."""

    def payload(self):
        return {"type": type(self).__name__, "message": str(self)}


class NearRational(NearParabError):
    """A continued-fraction digit is undecidable: some alpha_i sits within the
    guard band of 0 or 1/2 at the working precision."""


class PrecisionExhausted(NearParabError):
    """The requested precision cannot support the requested computation."""


class EscapeDetected(NearParabError):
    """An orbit left the escape radius where a bounded orbit was required."""


class NonBrjunoSuspected(NearParabError):
    """Partial Brjuno sums exceeded the configured blowup threshold."""


class NewtonDiverged(NearParabError):
    """Newton iteration failed to converge."""


class NoCycleFound(NearParabError):
    """Every Newton seed converged to an invalid point (origin, shorter
    period, or outside the dynamics)."""


class ZeroArgument(NearParabError):
    """Argument 0 passed where a nonzero complex number is required."""


class PoleArgument(NearParabError):
    """Argument on (or too close to) a pole of the covering map."""


class ChartDiverged(NearParabError):
    """Fatou-chart construction failed its own validation residuals."""


class OutsideRegime(NearParabError):
    """Rotation number outside the near-parabolic regime of the chart builder."""


class NoReturn(NearParabError):
    """No iterate re-entered the target strip within the allowed budget."""


class OutsideDomain(NearParabError):
    """Point outside the validated domain of a chart or operator."""


class CacheCorrupt(NearParabError):
    """On-disk cache entry failed its checksum."""
