from fractions import Fraction

from graphfair import Instance, ItemGraph


def path_graph(m, prefix="v"):
    return ItemGraph(
        tuple(f"{prefix}{i + 1}" for i in range(m)),
        tuple((i, i + 1) for i in range(m - 1)),
    )


def star_graph(leaf_count):
    labels = ("c",) + tuple(f"l{i + 1}" for i in range(leaf_count))
    return ItemGraph(labels, tuple((0, i + 1) for i in range(leaf_count)))


def cycle_graph(m):
    return ItemGraph(
        tuple(f"v{i + 1}" for i in range(m)),
        tuple((i, (i + 1) % m) for i in range(m)),
    )


def mk(graph, *rows):
    """Instance with agents a1..an; each row is a sequence of Fractions."""
    return Instance(
        graph,
        tuple(f"a{i + 1}" for i in range(len(rows))),
        tuple(tuple(Fraction(x) for x in row) for row in rows),
    )


def frac_row(numerators, denominator):
    return tuple(Fraction(x, denominator) for x in numerators)


def random_row(rng, m, bound=9):
    while True:
        base = [rng.randint(0, bound) for _ in range(m)]
        total = sum(base)
        if total:
            return tuple(Fraction(x, total) for x in base)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.rsplit("::", 1)[1]
            status = "PASS" if outcome == "passed" else "FAIL"
            if rows.get(name) != "FAIL":
                rows[name] = status
    if rows:
        terminalreporter.section("acceptance criteria")
        for name in sorted(rows):
            terminalreporter.write_line(f"{rows[name]}  {name}")
