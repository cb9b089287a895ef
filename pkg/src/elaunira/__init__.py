"""Elaunira namespace package."""
