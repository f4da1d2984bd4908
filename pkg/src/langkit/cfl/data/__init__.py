import enum
import logging
import os
import pathlib
from importlib import resources
from typing import Optional, TextIO, Tuple

import yaml

logger = logging.getLogger(__name__)

PACKAGE = "langkit.cfl.data"
PRESET_PATH_ENV = "LANGKIT_CFL_PRESET_PATH"


class ResourceType(enum.Enum):
    NOTFOUND = enum.auto()
    FILE = enum.auto()
    PACKAGED = enum.auto()


def _split_resource(name: str) -> Tuple[str, str]:
    """Package and file name of a packaged resource, e.g. ``systems/anbn.yaml``"""
    parts = pathlib.PurePosixPath(name).parts
    return ".".join((PACKAGE,) + parts[:-1]), parts[-1]


def _is_packaged(name: str) -> bool:
    package, res = _split_resource(name)
    try:
        return resources.files(package).joinpath(res).is_file()
    except ModuleNotFoundError:
        return False


def find_resource(
    name: str,
    path: Optional[str] = None,
    env_path: Optional[str] = None,
) -> Tuple[ResourceType, str]:
    """Locate a resource file

    Candidates are tried in order: ``path`` itself, the file of the same base
    name in each directory listed in the ``env_path`` environment variable
    (``os.pathsep``-separated), then the packaged resource ``name``.

    Returns
    -------
    ResourceType
        Where the resource has been found, if anywhere
    str
        Path to the file, or resource name for packaged data
    """
    if path is not None and pathlib.Path(path).is_file():
        return ResourceType.FILE, path
    if env_path is not None:
        dirs = os.getenv(env_path)
        if dirs:
            bname = pathlib.PurePosixPath(name).name
            for directory in dirs.split(os.pathsep):
                candidate = pathlib.Path(directory) / bname
                if candidate.is_file():
                    return ResourceType.FILE, str(candidate)
    if _is_packaged(name):
        return ResourceType.PACKAGED, name
    return ResourceType.NOTFOUND, ""


def open_resource(
    name: str,
    path: Optional[str] = None,
    env_path: Optional[str] = None,
) -> TextIO:
    """Open a resource for reading, see :func:`find_resource`

    Raises :class:`FileNotFoundError` if the resource does not exist
    """
    tp, location = find_resource(name, path, env_path)
    logger.debug("Resource %r resolved to %s %r", name, tp.name, location)
    if tp == ResourceType.FILE:
        return open(location, "r", encoding="utf-8")
    if tp == ResourceType.PACKAGED:
        package, res = _split_resource(location)
        return resources.files(package).joinpath(res).open("r", encoding="utf-8")
    raise FileNotFoundError(name)


def load_yaml(
    name: str,
    path: Optional[str] = None,
    env_path: Optional[str] = None,
) -> object:
    """Load a YAML resource, see :func:`find_resource`

    Raises :class:`FileNotFoundError` if the resource does not exist
    """
    with open_resource(name, path, env_path) as f:
        return yaml.safe_load(f)
