"""
utils/surface_io.py — Reading and writing surface files.

A surface file is one JSON object:
    {"cylinders": [{"w": "3/4", "boundary": ["a", "b"]}],
     "pairs": [["a", "b"]],
     "lengths": {"a": "3/8", "b": "3/8"}}
Rationals are "p/q" strings (plain integers are accepted, floats are not);
unknown fields are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from errors import SurfaceFormatError
from models import JenkinsStrebelSurface


def parse_surface(text: str, source: str = "<string>") -> JenkinsStrebelSurface:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise SurfaceFormatError(f"{source}: not valid JSON (line {e.lineno}, column {e.colno}): {e.msg}") from e
    if not isinstance(payload, dict):
        raise SurfaceFormatError(f"{source}: root must be an object")
    try:
        return JenkinsStrebelSurface.model_validate(payload)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise SurfaceFormatError(f"{source}: {problems}") from e


def load_surface(path: Union[str, Path]) -> JenkinsStrebelSurface:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SurfaceFormatError(f"{path}: cannot read surface file ({e.strerror})") from e
    return parse_surface(text, str(path))


def dump_surface(surface: JenkinsStrebelSurface, path: Optional[Union[str, Path]] = None) -> str:
    text = surface.model_dump_json(indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
