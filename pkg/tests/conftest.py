import pytest

from sdskit import catalog


def brute_difference_counts(v, sets):
    """Independent oracle: per-residue within-block difference counts by
    direct double loop over set elements."""
    counts = [0] * v
    for s in sets:
        for a in s:
            for b in s:
                if a != b:
                    counts[(a - b) % v] += 1
    return counts


@pytest.fixture(scope="session")
def entries():
    return catalog.load_default(verify=True)
