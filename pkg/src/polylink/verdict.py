from enum import Enum


class Verdict(str, Enum):
    WEAVE = "Weave"
    POLYCATENANE = "Polycatenane"
    MIXED = "Mixed"
    PARALLEL_ESSENTIAL = "ParallelEssential"
    INVALID = "Invalid"

    def __str__(self) -> str:
        return self.value
