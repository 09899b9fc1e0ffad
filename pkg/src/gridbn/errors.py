"""Exception hierarchy shared across the package."""


class ModelError(Exception):
    """Invalid model construction, parameters, or use."""


class CycleError(ModelError):
    """The parent graph contains a directed cycle."""


class EvidenceError(ModelError):
    """Evidence references unknown nodes, states, or hidden auxiliaries."""


class ImpossibleEvidenceError(EvidenceError):
    """The observed evidence has probability zero under the network."""


class SurveyError(ModelError):
    """A survey file or response set violates the elicitation schema."""
