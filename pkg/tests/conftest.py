import os

import pytest

os.environ.setdefault("GDL_THREADS", "1")


@pytest.fixture(scope="session")
def system():
    """Session-cached transfer systems (shared with the acceptance module)."""
    from gridlab.solver import get_system
    from gridlab.problems import get_problem

    def build(problem, n, prune=True):
        return get_system(get_problem(problem), n, prune_symmetry=prune)

    return build
