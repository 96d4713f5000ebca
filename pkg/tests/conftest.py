from datetime import datetime, timedelta, timezone

import pytest

from pcef.event_log import Case, Event, EventLog

T0 = datetime(2018, 3, 6, 9, 0, tzinfo=timezone.utc)  # a Tuesday


def make_log(sequences, start=T0, gap=timedelta(hours=1), resource="user_000", case_attributes=None):
    """Build a log from activity sequences; case i starts ``i`` days after ``start``."""
    cases = []
    for i, seq in enumerate(sequences):
        cid = f"c{i}"
        events = tuple(
            Event(cid, act, start + timedelta(days=i) + k * gap, resource, {})
            for k, act in enumerate(seq)
        )
        attrs = case_attributes[i] if case_attributes else {}
        cases.append(Case(cid, events, attrs))
    return EventLog(tuple(cases))


@pytest.fixture
def write_text(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
