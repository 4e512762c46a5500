"""Design and simulation toolkit for atoms coupled to mechanical oscillators."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("hybridsim")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .physcore import CONST, DomainError, species  # noqa: E402

__all__ = ["CONST", "DomainError", "species", "__version__"]
