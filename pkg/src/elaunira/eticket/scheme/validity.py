"""Validity period strings.

Validity periods are free text. They are compared only when they parse as
ISO-8601 dates or date-times; a bare date lasts until the end of that day
and naive times are read as UTC.
"""

from __future__ import annotations

from datetime import UTC, date, datetime, time


def parse_validity(text: str) -> datetime | None:
    try:
        if len(text) == 10:
            return datetime.combine(date.fromisoformat(text), time.max, tzinfo=UTC)
        moment = datetime.fromisoformat(text)
    except ValueError:
        return None
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=UTC)
    return moment


def ends_after(validity: str, limit: str) -> bool:
    """True when both parse and ``validity`` ends after ``limit``."""
    end, bound = parse_validity(validity), parse_validity(limit)
    return end is not None and bound is not None and end > bound


def expired(validity: str, now: datetime) -> bool:
    end = parse_validity(validity)
    return end is not None and end < now
