"""Elaunira Airflow providers namespace package."""
