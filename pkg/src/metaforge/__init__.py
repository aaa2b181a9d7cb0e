"""metaforge: metadata templates, JSON-LD instances, and authority resolution."""

from metaforge.errors import GatewayError, MetaforgeError

__version__ = "0.1.0"

__all__ = ["GatewayError", "MetaforgeError", "__version__"]
