from .decode import top_k_spans
from .manifest import ExportManifest, load_manifest
from .schemas import validate_jsonl, validate_record

__all__ = ["ExportManifest", "load_manifest", "top_k_spans", "validate_jsonl", "validate_record"]
