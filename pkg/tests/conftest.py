import pytest

from pilotgate import ChannelSpec, RcspConfig, costs_for_channel


@pytest.fixture(scope="session")
def std_channel():
    """Equal-probability channel with SNRs 1.5 / 0.5 (the standard operating point)."""
    return ChannelSpec.from_snrs(0.5, 1.5, 0.5)


@pytest.fixture(scope="session")
def std_cost(std_channel):
    """Data costs for the standard point at k = 128, epsilon = 1e-2."""
    return costs_for_channel(std_channel, RcspConfig(k=128, epsilon=1e-2))
