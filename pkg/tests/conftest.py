import numpy as np
import pytest

import prmimo as pm


@pytest.fixture
def small_config():
    """Quick-to-simulate channel used by most unit tests."""
    return pm.ChannelConfig(
        n_tx=8,
        n_rx=2,
        n_clusters=4,
        n_rays=2,
        angle_spread_std=np.deg2rad(15.0),
        power_profile=pm.ILL_CONDITIONED,
    )


@pytest.fixture
def desk_config():
    return pm.ChannelConfig(
        n_tx=16,
        n_rx=4,
        n_clusters=8,
        n_rays=4,
        angle_spread_std=np.deg2rad(15.0),
        power_profile=pm.ILL_CONDITIONED,
    )
