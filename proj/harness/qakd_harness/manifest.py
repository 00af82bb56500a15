import json
from dataclasses import dataclass, field
from pathlib import Path

from .schemas import validate_record


@dataclass
class ExportManifest:
    dataset: Path
    teacher_model: str
    student_model: str
    teacher_tokenizer: str = ""
    student_tokenizer: str = ""
    encoder_model: str = ""
    max_len: int = 384
    outputs: dict = field(default_factory=dict)

    def output(self, name):
        if name not in self.outputs:
            raise KeyError(f"manifest has no output path for {name!r}")
        return Path(self.outputs[name])

    def missing_outputs(self):
        return [name for name, p in self.outputs.items() if not Path(p).exists()]


def load_manifest(path):
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    validate_record("manifest", raw)
    m = ExportManifest(**raw)
    m.dataset = Path(m.dataset)
    # Tokenizers default to the model identifiers.
    m.teacher_tokenizer = m.teacher_tokenizer or m.teacher_model
    m.student_tokenizer = m.student_tokenizer or m.student_model
    return m
