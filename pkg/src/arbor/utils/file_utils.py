# src/arbor/utils/file_utils.py
import json
from typing import Literal, Optional

import yaml

FileType = Literal["json", "yaml", "unknown"]


def detect_file_type(filename: Optional[str], raw_bytes: bytes) -> FileType:
    """
    Best-effort file type detection for series documents:
    1. Use extension if available
    2. Otherwise try parsing JSON, then YAML
    """
    name = (filename or "").lower()

    if name.endswith(".json"):
        return "json"
    if name.endswith((".yaml", ".yml")):
        return "yaml"

    try:
        text = raw_bytes.decode("utf-8")
    except UnicodeDecodeError:
        return "unknown"

    try:
        json.loads(text)
        return "json"
    except ValueError:
        pass

    try:
        loaded = yaml.safe_load(text)
    except yaml.YAMLError:
        return "unknown"
    # a bare scalar parses as YAML too; only mappings can be documents
    return "yaml" if isinstance(loaded, dict) else "unknown"
