import logging
import sys
from typing import Optional

from cones import Cone, parse_cone
from config import ToleranceConfig
from fixture_config import load_fixture_file
from fixtures import FixtureError, SetValuedFixture
from paper_examples import build_fixture

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None) -> None:
    """Configure the root logger: stderr always, a file when asked. Repeated calls replace our handlers only."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_minimax", False):
            root.removeHandler(handler)
            handler.close()
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    formatter = logging.Formatter(LOG_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._minimax = True
        root.addHandler(handler)
    try:
        root.setLevel(level.upper())
    except ValueError:
        root.setLevel(logging.WARNING)
        logging.getLogger(__name__).warning("unknown log level %s, using WARNING", level)


def load_fixture(
    name: Optional[str] = None, fixture_file: Optional[str] = None, cfg: Optional[ToleranceConfig] = None
) -> SetValuedFixture:
    """A built-in fixture by name, or a custom one from a JSON file."""
    cfg = cfg or ToleranceConfig()
    if fixture_file:
        return load_fixture_file(fixture_file, cfg.grid_resolution, cfg.sampling())
    if not name:
        raise FixtureError("name a fixture or give a fixture file")
    return build_fixture(name, cfg.grid_resolution, cfg.sampling())


def load_cone(spec: Optional[str], fx: SetValuedFixture, cfg: Optional[ToleranceConfig] = None) -> Cone:
    """The cone named on the command line, else the fixture's default, at the configured tolerances."""
    cfg = cfg or ToleranceConfig()
    return parse_cone(spec or fx.default_cone, cfg.eps_cone, cfg.eps_interior)
