"""Domain exception types shared across the testbed."""

from __future__ import annotations


class CrewsimError(Exception):
    """Base class for all testbed errors."""


# -- configuration ----------------------------------------------------------

class SchemaError(CrewsimError):
    """A config file is missing a field, has a wrong type, or an unknown key."""


class DuplicateIdError(SchemaError):
    """Two events in the same partition share an id."""


class ConditionMismatchError(SchemaError):
    """An event's condition does not match the partition it was declared in."""


class UnknownVehicleError(SchemaError):
    """A scenario entry references a vehicle that was never loaded."""


class UnknownEventError(SchemaError):
    """A scenario entry references an event id its vehicle does not define."""


class VisibilityOverlapError(SchemaError):
    """A task attribute is visible to neither role."""


class UnboundHandlerError(CrewsimError):
    """A configured event has no behavior script registered for it."""


# -- geometry ----------------------------------------------------------------

class InvalidSpecError(CrewsimError):
    """A pipe specification violates its own invariants."""


class NotOnWallError(CrewsimError):
    """Clamp zones were requested for a pipe that is not touching the wall."""


# -- world / intents ---------------------------------------------------------

class RoleViolationError(CrewsimError):
    """An intent kind that is not legal for the sending role."""


class HeldConflictError(CrewsimError):
    """An entity is already held by the other participant."""


class PreconditionError(CrewsimError):
    """An intent whose world preconditions do not hold."""


class NoGlueError(PreconditionError):
    """Glue was applied with zero charges left."""


class SizeMismatchError(PreconditionError):
    """Connector and pipe diameters differ."""


class NotGluedError(PreconditionError):
    """Attach attempted on an end that has not been glued."""


class OutOfReachError(PreconditionError):
    """Wall work attempted above the actor's reach."""


class NotInLiftError(PreconditionError):
    """Lift control sent by a participant who is not in the lift."""


class OutOfBoundsError(PreconditionError):
    """Lift movement would leave the workspace."""


class LengthError(PreconditionError):
    """A cut length is not inside (0, pipe length]."""


# -- metrics -----------------------------------------------------------------

class RangeError(CrewsimError):
    """A questionnaire item count or value is outside the instrument's range."""


class MappingError(CrewsimError):
    """A subscale mapping does not cover each item exactly once."""


class ParseError(CrewsimError):
    """A structured log line could not be parsed."""


# -- networking / harness ----------------------------------------------------

class ProtocolError(CrewsimError):
    """A wire message violated the protocol."""


class RoleTakenError(ProtocolError):
    """A join requested a role that is already bound."""


class SessionFullError(ProtocolError):
    """A join arrived when the session already had two clients."""


class TimeoutError(CrewsimError):  # noqa: A001 - domain timeout, caught by name
    """A bot run exhausted its budget without completing."""


class HashMismatchError(CrewsimError):
    """A replay did not reproduce the recorded snapshot hash."""
