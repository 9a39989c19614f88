"""Bundled grid diagrams used by the law suite, the CLI and the tests.

Every entry is a plain ``.grid`` file under ``hflc/data``; ``load`` parses
one by stem name.  The figure-eight entry was found by an Euler-
characteristic scan over 6x6 knot grids and frozen here (see the comment
in the file itself).
"""

from importlib import resources

from .grid import GridDiagram, parse_grid

_PKG = "hflc"


def _data_dir():
    return resources.files(_PKG) / "data"


def names():
    """Sorted stem names of the bundled grids."""
    out = [p.name[:-5] for p in _data_dir().iterdir()
           if p.name.endswith(".grid")]
    return sorted(out)


def load(name: str):
    """(GridDiagram, Coloring or None) for a bundled grid by stem name."""
    entry = _data_dir() / f"{name}.grid"
    if not entry.is_file():
        raise KeyError(f"no bundled grid named {name!r}; "
                       f"have {', '.join(names())}")
    return parse_grid(entry.read_text(encoding="utf-8"))


def grid(name: str) -> GridDiagram:
    return load(name)[0]


def text(name: str) -> str:
    """Raw file contents (CLI passthrough for bundled names)."""
    entry = _data_dir() / f"{name}.grid"
    if not entry.is_file():
        raise KeyError(f"no bundled grid named {name!r}")
    return entry.read_text(encoding="utf-8")
