"""Exception taxonomy shared by every layer.

Domain failures derive from :class:`EmissionModelError` so callers (CLI,
service) can map them uniformly: exit code 1 on the command line, HTTP 422
behind the API.  Structural problems in input documents raise
:class:`SchemaError` (HTTP 400); unknown preset names raise
:class:`UnknownPresetError` (HTTP 404).
"""

from __future__ import annotations


class EmissionModelError(Exception):
    """Base class for domain errors raised by the modeling engine."""


class SchemaError(EmissionModelError):
    """An input document is structurally invalid (unknown key, wrong type)."""


class UnknownPresetError(EmissionModelError):
    """A preset reference does not name any embedded or user-supplied preset."""


class UnknownCompoundError(EmissionModelError):
    """A compound id is absent from the registry in use."""


class MissingHorizonError(EmissionModelError):
    """No GWP value is available at the requested time horizon."""


class ZeroWeightMixError(EmissionModelError):
    """Every emission ratio in a compound mix is zero."""


class MissingFeatureError(EmissionModelError):
    """A die-area model requires a feature the hardware spec does not carry."""


class InvalidValueError(EmissionModelError):
    """A field value violates its domain constraint.

    ``field`` carries a dotted path such as ``"spec.node_nm"`` so adapters
    can surface exactly which input was rejected.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.detail = message


class ProfileError(EmissionModelError):
    """A fab profile is incomplete or inconsistent for the requested use."""


class LeverError(EmissionModelError):
    """A scenario lever cannot be applied to the current spec/profile pair."""


class CalibrationError(EmissionModelError):
    """Calibration inputs cannot support the requested fit."""


class CatalogError(EmissionModelError):
    """A component catalog is invalid or cannot satisfy a query."""
