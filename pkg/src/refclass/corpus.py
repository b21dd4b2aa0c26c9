"""Bundled example knowledge bases and the verdicts they should produce."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .model import Interval


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    query: str
    expected: Interval
    note: str

    @property
    def filename(self) -> str:
        return f"{self.name}.rkb"

    def text(self) -> str:
        return resources.files(__package__).joinpath("corpus", self.filename).read_text("utf-8")

    def path(self):
        return resources.files(__package__).joinpath("corpus", self.filename)


ENTRIES = (
    CorpusEntry("urn_a", "b18 in Black", Interval.point("4/5"), "urn A is a known subset of the room"),
    CorpusEntry("urn_room", "c1 in BlackDraw", Interval.point("41/55"), "two-stage urn-then-ball choice"),
    CorpusEntry("nixon", "#18 in Pacifist", Interval("1/5", "9/10"), "unresolved conflict widens to the cover"),
    CorpusEntry("tweety_bird", "tweety in Flier", Interval.point("9/10"), "bird only"),
    CorpusEntry("tweety_penguin", "tweety in Flier", Interval.point("1/20"), "penguin beats bird"),
    CorpusEntry("tweety_flying_penguin", "tweety in Flier", Interval.point(1), "flying penguin beats penguin"),
    CorpusEntry("coin", "choice in NotChocolate", Interval.point("1/2"), "equivalent sentences share a verdict"),
    CorpusEntry("supersample", "s1 in Rep10", Interval("3/5", "7/10"), "larger sample beats its subsample"),
    CorpusEntry("strength_nested", "patient in Recover", Interval("9/20", "11/20"), "narrower interval wins"),
    CorpusEntry("strength_equal", "patient in Recover", Interval("2/5", "3/5"), "equal intervals coexist"),
)


def get(name: str) -> CorpusEntry:
    for entry in ENTRIES:
        if entry.name == name:
            return entry
    raise KeyError(name)
