from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class CostReport:
    """Operation counters filled in by the instrumented kernels.

    ``mul_add`` counts word multiply-accumulate slots, ``divisions`` counts
    machine divisions by ``p`` (one per REDQ or per delayed remaindering),
    ``table_accesses`` counts correction/conversion table lookups and
    ``reduction_calls`` counts reduced words.  ``max_accumulation`` records the
    longest run of products summed between two reductions.
    """

    mul_add: int = 0
    divisions: int = 0
    table_accesses: int = 0
    reduction_calls: int = 0
    max_accumulation: int = 0

    def note_accumulation(self, length: int) -> None:
        if length > self.max_accumulation:
            self.max_accumulation = length

    def merge(self, other: "CostReport") -> None:
        self.mul_add += other.mul_add
        self.divisions += other.divisions
        self.table_accesses += other.table_accesses
        self.reduction_calls += other.reduction_calls
        self.note_accumulation(other.max_accumulation)

    def as_dict(self) -> dict:
        return asdict(self)
