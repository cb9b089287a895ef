"""E-ticket operators for Airflow."""

from elaunira.airflow.providers.eticket.operators.eticket import DoubleSpendDetectionOperator

__all__ = ["DoubleSpendDetectionOperator"]
