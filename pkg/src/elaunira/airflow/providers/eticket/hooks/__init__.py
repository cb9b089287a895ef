"""Elaunira e-ticket hooks."""

from elaunira.airflow.providers.eticket.hooks.eticket import ETicketHook

__all__ = ["ETicketHook"]
