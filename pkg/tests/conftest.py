import pytest


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    # the env var overrides config seeds; keep tests hermetic
    monkeypatch.delenv("BUBBLELINK_SEED", raising=False)
