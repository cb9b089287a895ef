"""Elaunira e-ticket Airflow provider."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("elaunira-eticket")
except PackageNotFoundError:
    __version__ = "0.0.0"


def get_provider_info():
    """Return provider metadata for Airflow."""
    return {
        "package-name": "elaunira-eticket",
        "name": "E-Ticket",
        "description": "Airflow provider for e-ticket double-spend audits",
        "connection-types": [
            {
                "connection-type": "eticket",
                "hook-class-name": "elaunira.airflow.providers.eticket.hooks.eticket.ETicketHook",
            }
        ],
        "versions": [__version__],
    }
