"""crewsim: a deterministic multi-user construction-site simulation testbed."""

__version__ = "0.1.0"

PROTOCOL_VERSION = 1
