"""Reference adapters for the sgecaug pipeline adapter protocol.

Mock backends are deterministic and dependency-light so CI runs without any
neural model installed; real-model backends are optional extras and the
conformance suite is the only mandatory surface.
"""

__version__ = "0.1.0"
PROTOCOL_VERSION = "0.1.0"
