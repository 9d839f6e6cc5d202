"""butler: an instructable household agent.

Dialogue goes in, an action program comes out of a retrieval-augmented
completion backend, and a deterministic grid-world simulator executes it with
mapping, navigation, precondition repair, and failure correction.
"""

__version__ = "0.1.0"

from .resources import data_path, read_data_text

__all__ = ["data_path", "read_data_text", "__version__"]
