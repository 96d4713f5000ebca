"""Naive recomputations used as independent oracles.

Nothing here imports pcef's analysis code: every quantity is recomputed by
walking the raw events case by case.
"""
from datetime import timedelta, timezone


def variant_counts(log):
    counts = {}
    for case in log.cases:
        key = tuple(e.activity for e in case.events)
        counts[key] = counts.get(key, 0) + 1
    return counts


def dfg(log):
    out = {}
    for case in log.cases:
        labels = ["<s>"] + [e.activity for e in case.events] + ["<e>"]
        for i in range(len(labels) - 1):
            pair = (labels[i], labels[i + 1])
            out[pair] = out.get(pair, 0) + 1
    return out


def failure(log, target, terminals):
    n = rework = term = either = 0
    for case in log.cases:
        k = sum(1 for e in case.events if e.activity == target)
        if k == 0:
            continue
        n += 1
        r = k > 1
        t = case.events[len(case.events) - 1].activity in terminals
        rework += r
        term += t
        either += r or t
    return {"rework_ratio": rework / n, "terminal_failure_ratio": term / n, "failure_rate": either / n}


def daily_counts(log, target):
    """Occurrences per UTC calendar day, zero-filled between first and last event of the log."""
    stamps = [e.timestamp for c in log.cases for e in c.events]
    first = min(stamps).astimezone(timezone.utc).date()
    last = max(stamps).astimezone(timezone.utc).date()
    days = {}
    d = first
    while d <= last:
        days[d] = 0
        d = d + timedelta(days=1)
    for c in log.cases:
        for e in c.events:
            if e.activity == target:
                days[e.timestamp.astimezone(timezone.utc).date()] += 1
    return days


def mean_days(durations):
    total = timedelta(0)
    for d in durations:
        total += d
    return total / (timedelta(days=1) * len(durations))


def duration(log, target):
    with_t, without = [], []
    for c in log.cases:
        span = c.events[-1].timestamp - c.events[0].timestamp
        if any(e.activity == target for e in c.events):
            with_t.append(span)
        else:
            without.append(span)
    out = {"mean_throughput_with": mean_days(with_t)}
    if without:
        out["mean_throughput_without"] = mean_days(without)
    return out


def out_of_hours_ratio(log, target, open_hour=8, close_hour=18):
    """Mon-Fri, [open_hour, close_hour) UTC counts as business hours."""
    n = outside = 0
    for c in log.cases:
        for e in c.events:
            if e.activity != target:
                continue
            n += 1
            t = e.timestamp.astimezone(timezone.utc)
            minutes = t.hour * 60 + t.minute + (t.second + t.microsecond / 1e6) / 60
            if t.isoweekday() >= 6 or minutes < open_hour * 60 or minutes >= close_hour * 60:
                outside += 1
    return outside / n


def resources(log, target):
    users = set()
    per_case = []
    for c in log.cases:
        mine = set()
        hit = False
        for e in c.events:
            if e.activity == target:
                hit = True
                if e.resource is not None:
                    users.add(e.resource)
                    mine.add(e.resource)
        if hit:
            per_case.append(len(mine))
    return {"n_distinct_users_on_activity": len(users), "mean_users_per_case": sum(per_case) / len(per_case)}
