"""Prompt construction for external sequence generators.

The engine itself never calls a generative model; it emits a JSON manifest of
per-category prompts that any text-to-video backend (or the scorer package's
generation stub) can consume to fill an instance bank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .jsonio import write_json

PROMPT_TEMPLATE = ("A close up video of one moving dynamic {category} in "
                   "changing background, moving camera, centred.")
DEFAULT_FRAMES_PER_SEQUENCE = 16


def build_prompt(category_name: str) -> str:
    """Render the generation prompt for one category."""
    if not isinstance(category_name, str) or not category_name.strip():
        raise ValidationError("category name must be a non-empty string")
    return PROMPT_TEMPLATE.format(category=category_name)


@dataclass
class PromptEntry:
    category: str
    prompt: str
    sequences: int
    frames_per_sequence: int = DEFAULT_FRAMES_PER_SEQUENCE


@dataclass
class PromptManifest:
    entries: list[PromptEntry] = field(default_factory=list)

    @property
    def total_sequences(self) -> int:
        return sum(e.sequences for e in self.entries)

    @property
    def total_frames(self) -> int:
        return sum(e.sequences * e.frames_per_sequence for e in self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [
                {
                    "category": e.category,
                    "prompt": e.prompt,
                    "sequences": e.sequences,
                    "frames_per_sequence": e.frames_per_sequence,
                }
                for e in self.entries
            ],
            "totals": {
                "categories": len(self.entries),
                "sequences": self.total_sequences,
                "frames": self.total_frames,
            },
        }


def generate_prompt_manifest(categories: list[str], sequences_per_category: int,
                             frames_per_sequence: int = DEFAULT_FRAMES_PER_SEQUENCE,
                             ) -> PromptManifest:
    """One prompt entry per category; duplicate names are rejected."""
    if not categories:
        raise ValidationError("category list must be non-empty")
    if sequences_per_category < 1:
        raise ValidationError(
            f"sequences_per_category must be >= 1, got {sequences_per_category}")
    if frames_per_sequence < 1:
        raise ValidationError(
            f"frames_per_sequence must be >= 1, got {frames_per_sequence}")
    seen = set()
    for name in categories:
        if name in seen:
            raise ValidationError(f"duplicate category name: {name!r}")
        seen.add(name)
    entries = [
        PromptEntry(category=name, prompt=build_prompt(name),
                    sequences=sequences_per_category,
                    frames_per_sequence=frames_per_sequence)
        for name in categories
    ]
    return PromptManifest(entries=entries)


def write_prompt_manifest(manifest: PromptManifest, path) -> None:
    write_json(manifest.to_json(), path)
