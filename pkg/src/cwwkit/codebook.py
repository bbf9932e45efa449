"""Codebook: the persistent word -> IT2 word model map.

JSON layout, one entry per word in insertion order:

    {"entries": [{"word": "...", "class": "left|interior|right",
                  "umf": [a, b, c, d], "lmf": [e, f, g, h, hl],
                  "trace": [n, n1, m1, m2, m, m_star]}, ...]}

Words whose encoding failed keep their slot with an "error" string in
place of the model, so nothing disappears silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .it2 import FOU_CLASSES, It2Fou, Trapezoid


@dataclass(frozen=True)
class CodebookEntry:
    word: str
    fou: It2Fou | None = None
    trace: tuple = ()
    error: str = ""

    def to_json(self):
        obj = {"word": self.word}
        if self.fou is not None:
            obj["class"] = self.fou.fou_class
            obj["umf"] = list(self.fou.umf.corners())
            obj["lmf"] = list(self.fou.lmf.corners()) + [self.fou.lmf.height]
        else:
            obj["error"] = self.error
        if self.trace:
            obj["trace"] = list(self.trace)
        return obj

    @classmethod
    def from_json(cls, obj):
        word = obj["word"]
        trace = tuple(obj.get("trace", ()))
        if "error" in obj:
            return cls(word, None, trace, obj["error"])
        fou_class = obj["class"]
        if fou_class not in FOU_CLASSES:
            raise ValueError(f"unknown FOU class {fou_class!r} for word {word!r}")
        umf = Trapezoid(*obj["umf"], 1.0)
        lmf = Trapezoid(*obj["lmf"][:4], obj["lmf"][4])
        return cls(word, It2Fou(umf, lmf, fou_class), trace)


@dataclass(frozen=True)
class Codebook:
    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("codebook needs at least one entry")
        words = [e.word for e in entries]
        if len(set(words)) != len(words):
            raise ValueError("codebook words must be distinct")

    @property
    def words(self):
        return [e.word for e in self.entries]

    def valid_entries(self):
        """Entries that carry a word model (encoding succeeded)."""
        return [e for e in self.entries if e.fou is not None]

    def fou(self, word: str) -> It2Fou:
        for e in self.entries:
            if e.word == word:
                if e.fou is None:
                    raise KeyError(f"word {word!r} has no model: {e.error}")
                return e.fou
        raise KeyError(f"word {word!r} not in codebook")

    def to_json(self):
        return {"entries": [e.to_json() for e in self.entries]}

    def dumps(self) -> str:
        """Canonical serialisation; identical inputs give identical bytes."""
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(CodebookEntry.from_json(e) for e in obj["entries"]))

    @classmethod
    def loads(cls, text: str):
        return cls.from_json(json.loads(text))

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())
