"""Exception types shared across the toolkit."""


class MMError(Exception):
    """Base class for all mmkit errors."""


class ValidationError(MMError):
    """A candidate space violates a structural invariant."""


class AsymmetricDistance(ValidationError):
    """Distance matrix is not symmetric."""


class TriangleViolation(ValidationError):
    """Triangle inequality fails; carries a witness triple (i, j, k).

    The witness satisfies d(i, k) > d(i, j) + d(j, k) beyond tolerance.
    """

    def __init__(self, i: int, j: int, k: int, excess: float):
        self.witness = (i, j, k)
        self.excess = excess
        super().__init__(
            f"triangle inequality violated at ({i},{j},{k}): excess {excess:.3e}"
        )


class NotProbability(ValidationError):
    """Weights are not a strictly positive probability vector."""


class DisconnectedGraph(ValidationError):
    """Edge list does not connect all points."""


class NonpositiveEdgeLength(ValidationError):
    """An edge has length <= 0."""


class SchemaError(MMError):
    """A JSON document does not match the space schema."""


class BadParameter(MMError):
    """A builder parameter is outside its documented range."""


class EmptySubset(MMError):
    """An operation received an empty point subset."""


class NullSet(MMError):
    """Conditioning on a subset of measure zero."""


class BadKappa(MMError):
    """A kappa argument is outside its admissible range."""


class BadLambda(MMError):
    """lambda must be positive."""


class BadTime(MMError):
    """Heat-kernel time must be positive."""


class BadGrid(MMError):
    """A kappa grid entry is outside (0, 1/2)."""


class BadOrder(MMError):
    """More subsets than the eigenvalue order allows (l > k)."""


class TooLargeForExact(MMError):
    """The instance exceeds the exhaustive-search size limit."""


class PreconditionViolated(MMError):
    """The hypotheses of a checked statement are not met by the inputs."""


class SolverFailure(MMError):
    """The linear-programming solver did not return an optimal solution."""


class MissingPathTable(MMError):
    """Interpolation at 0 < t < 1 needs a path table on metric-only spaces."""


class NoGraphData(MMError):
    """The space carries no edge list; Laplacian operations unavailable."""


class DegenerateSets(MMError):
    """All measure products equal 1, so every log term vanishes."""


class ZeroGap(MMError):
    """A zero eigenvalue above index 0 makes consecutive ratios undefined."""


class UnknownSuite(MMError):
    """verify was asked for a suite name it does not know."""
