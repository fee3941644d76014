"""Network serialization: BIF subset, native JSON, bundled examples."""

from .asia import asia_bif_text, asia_json_text, builtin_asia
from .bif import ParseDiagnostic, parse_bif, write_bif
from .netjson import (
    network_from_document,
    network_to_document,
    parse_network_json,
    write_network_json,
)

__all__ = [
    "ParseDiagnostic",
    "asia_bif_text",
    "asia_json_text",
    "builtin_asia",
    "network_from_document",
    "network_to_document",
    "parse_bif",
    "parse_network_json",
    "write_bif",
    "write_network_json",
]
