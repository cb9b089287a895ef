"""Privacy-preserving attribute-based e-tickets."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("elaunira-eticket")
except PackageNotFoundError:
    __version__ = "0.0.0"
