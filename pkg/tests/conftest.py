"""Shared fixtures for the awtp test-suite."""

import os

import numpy as np
import pytest

from awtp.codes import awtp_derive_params
from awtp.codes.field import prime_field
from awtp.config import Settings

DESK = dict(q=241, u=30, v=3, N=8, R="1/30", rho_r="1/8", rho_w="1/2")
DESK_SPEC = {key: str(value) for key, value in DESK.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def F13():
    return prime_field(13)


@pytest.fixture(scope="session")
def desk_params():
    """The desk parameter set: q=241, u=30, v=3, N=8, R=1/30, rho_r=1/8, rho_w=1/2."""
    return awtp_derive_params(**DESK)


@pytest.fixture
def settings():
    return Settings(enumeration_cap=200_000)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("AWTP_"):
            monkeypatch.delenv(key, raising=False)
