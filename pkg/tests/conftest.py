"""Shared fixtures: the bundled example pipeline, computed once per run."""

from __future__ import annotations

import pytest

import stackpol as sp


@pytest.fixture(scope="session")
def example_model():
    return sp.running_example()


@pytest.fixture(scope="session")
def example_phi(example_model):
    return sp.compute_phi_meth(example_model)


@pytest.fixture(scope="session")
def example_universe(example_model):
    return sp.generate_permissions(example_model)


@pytest.fixture(scope="session")
def example_result(example_model, example_universe):
    return sp.generate_policy(example_model, example_universe)


@pytest.fixture(scope="session")
def example_policy(example_result):
    return example_result.policy
