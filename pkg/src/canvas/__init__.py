"""Canvas: dimensional knowledge exploration with credibility tracking.

Knowledge entries scoped across logical, temporal and geographical
dimensions; source credibility profiles and per-content evaluations;
free-text query resolution over a taxonomy; and versioned, branchable,
shareable exploration pathways. Served over HTTP and a mirroring CLI.
"""

__version__ = "0.1.0"

from .store import CanvasStore

__all__ = ["CanvasStore", "__version__"]
