from __future__ import annotations

import pytest

from prodplan import (
    build_demo_model,
    demo_goal_2341,
    derive_domain,
    derive_problem,
    ground,
)


@pytest.fixture(scope="session")
def demo_model():
    return build_demo_model()


@pytest.fixture(scope="session")
def demo_domain(demo_model):
    domain, report = derive_domain(demo_model)
    return domain, report


@pytest.fixture(scope="session")
def demo_task(demo_model, demo_domain):
    domain, report = demo_domain
    problem = derive_problem(demo_model, demo_goal_2341(), report)
    return ground(domain, problem)
