"""Elaunira Airflow namespace package."""
