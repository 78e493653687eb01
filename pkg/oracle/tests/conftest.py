import shutil

import pytest


@pytest.fixture(scope="session")
def motivix_bin() -> str:
    """Path to the engine CLI under cross-check; required for interop tests."""
    path = shutil.which("motivix")
    if path is None:
        pytest.fail("motivix CLI not found on PATH; install the primary package")
    return path
