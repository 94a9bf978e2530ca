"""lw-lite: extensible records, fine-grained overloading and inject/eject."""

try:
    from ._lwlite import check, core, run, type_of
except ImportError:  # in-tree builds put the extension next to the package
    from _lwlite import check, core, run, type_of

__all__ = ["check", "core", "run", "type_of"]
