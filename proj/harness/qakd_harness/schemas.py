"""JSON schemas for the files exchanged with the qakd binary."""

import json
from functools import lru_cache
from importlib import resources

import jsonschema

KINDS = ("tokens", "logits", "predictions", "embeddings", "gold", "pool", "manifest")


@lru_cache(maxsize=None)
def schema(kind):
    if kind not in KINDS:
        raise ValueError(f"unknown schema kind {kind!r}")
    text = resources.files(__package__).joinpath("schemas", f"{kind}.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_record(kind, record):
    jsonschema.validate(record, schema(kind))


def validate_jsonl(kind, path):
    """Validates every line; returns the number of records."""
    n = 0
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                validate_record(kind, json.loads(line))
            except (ValueError, jsonschema.ValidationError) as e:
                raise ValueError(f"{path}:{lineno}: {e}") from e
            n += 1
    return n
