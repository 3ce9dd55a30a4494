import pytest

from cones import parse_cone
from config import ToleranceConfig
from paper_examples import build_fixture


@pytest.fixture
def cfg():
    # coarse grids keep every sweep to a fraction of a second
    return ToleranceConfig(
        grid_resolution=20,
        value_resolution=21,
        lambda_steps=11,
        n_max=2,
        coeff_steps=8,
        disc_angles=12,
        disc_radii=4,
        max_tuples=300,
        selection_cap=5,
    )


@pytest.fixture
def make(cfg):
    """Build a named fixture on the coarse grid, with its default cone."""
    def _make(name, resolution=None):
        fx = build_fixture(name, resolution or cfg.grid_resolution, cfg.sampling())
        return fx, parse_cone(fx.default_cone, cfg.eps_cone, cfg.eps_interior)
    return _make
