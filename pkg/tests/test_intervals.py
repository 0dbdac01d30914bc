from __future__ import annotations

from datetime import date, timedelta

import pytest
from hypothesis import given, strategies as st

from canvas.errors import InvalidInterval
from canvas.intervals import ONGOING, DateInterval, parse_window

DATES = st.dates(min_value=date(1900, 1, 1), max_value=date(2100, 1, 1))


def interval_strategy():
    return st.builds(
        lambda start, span, ongoing: DateInterval(
            start, ONGOING if ongoing else start + timedelta(days=span)
        ),
        DATES, st.integers(min_value=1, max_value=20000), st.booleans(),
    )


def test_empty_interval_rejected():
    with pytest.raises(InvalidInterval):
        DateInterval(date(2020, 1, 1), date(2020, 1, 1))
    with pytest.raises(InvalidInterval):
        DateInterval(date(2020, 1, 2), date(2020, 1, 1))


def test_half_open_membership():
    interval = DateInterval(date(2020, 1, 1), date(2021, 1, 1))
    assert interval.contains_date(date(2020, 1, 1))
    assert interval.contains_date(date(2020, 12, 31))
    assert not interval.contains_date(date(2021, 1, 1))


def test_ongoing_orders_after_every_date():
    open_ended = DateInterval(date(2020, 1, 1), ONGOING)
    assert open_ended.contains_date(date(9999, 12, 31))
    assert open_ended.contains(DateInterval(date(2025, 1, 1), date(2030, 1, 1)))
    closed = DateInterval(date(2020, 1, 1), date(2030, 1, 1))
    assert not closed.contains(open_ended)
    assert open_ended.contains(open_ended)


def test_intersection_examples():
    a = DateInterval(date(2015, 1, 1), date(2020, 1, 1))
    b = DateInterval(date(2018, 1, 1), ONGOING)
    assert a.intersect(b) == DateInterval(date(2018, 1, 1), date(2020, 1, 1))
    assert b.intersect(a) == a.intersect(b)
    disjoint = DateInterval(date(2020, 1, 1), date(2021, 1, 1))
    assert a.intersect(disjoint) is None


@given(interval_strategy(), interval_strategy(), DATES)
def test_intersection_agrees_with_membership(a, b, probe):
    joint = a.intersect(b)
    both = a.contains_date(probe) and b.contains_date(probe)
    if joint is None:
        assert not both
    else:
        assert joint.contains_date(probe) == both


@given(interval_strategy(), interval_strategy())
def test_containment_consistent_with_intersection(a, b):
    if a.contains(b):
        assert a.intersect(b) == b


def test_window_parsing():
    assert parse_window("2013-01-01..2024-01-01") == DateInterval(
        date(2013, 1, 1), date(2024, 1, 1)
    )
    assert parse_window("2020-01-01..ongoing").ongoing
    assert parse_window("2020-01-01..").ongoing
    assert parse_window("..2024-01-01").start == date.min
    with pytest.raises(InvalidInterval):
        parse_window("2020-01-01")
    with pytest.raises(InvalidInterval):
        parse_window("2024-01-01..2020-01-01")


def test_doc_round_trip():
    for interval in (
        DateInterval(date(2020, 1, 1), ONGOING),
        DateInterval(date(2015, 6, 2), date(2018, 3, 4)),
    ):
        assert DateInterval.from_doc(interval.to_doc()) == interval


def test_title_rendering():
    assert DateInterval(date(2020, 1, 1), ONGOING).render() == "post-2020"
    assert DateInterval(date(2015, 1, 1), date(2018, 1, 1)).render() == "2015-2017"
    assert DateInterval(date(2015, 1, 1), date(2016, 1, 1)).render() == "in 2015"
    assert DateInterval(date(2015, 3, 1), ONGOING).render() == "from 2015-03-01 onward"
    assert (
        DateInterval(date(2015, 3, 1), date(2016, 2, 1)).render()
        == "from 2015-03-01 to 2016-02-01"
    )
