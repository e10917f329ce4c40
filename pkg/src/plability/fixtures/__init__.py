"""Example product description files shipped with the package."""

from importlib import resources


def path(name: str) -> str:
    """Filesystem path of a shipped fixture, e.g. ``path("door_ecu.plp")``."""
    return str(resources.files(__name__).joinpath(name))


def read(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")
