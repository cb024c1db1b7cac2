"""Size-bounded formula search problems and the backends that solve them."""
from .encoding import Encoding, encode_interval, encode_point
from .external import ExternalSmtBackend, SolverError, SolverTimeout
from .internal import InternalEnumerativeBackend
from .model import MalformedModel, SolverModel, decode_model, encode_assignment


def make_backend(name: str = "internal", command: str | None = None):
    """``internal`` (enumerative, pure numpy) or ``external`` (SMT solver process)."""
    if name == "internal":
        return InternalEnumerativeBackend()
    if name == "external":
        return ExternalSmtBackend.from_string(command)
    raise ValueError(f"unknown backend {name!r}")


__all__ = [
    "Encoding", "ExternalSmtBackend", "InternalEnumerativeBackend", "MalformedModel", "SolverError",
    "SolverModel", "SolverTimeout", "decode_model", "encode_assignment", "encode_interval", "encode_point",
    "make_backend",
]
