"""
Per-epoch training history and its CSV form.

CSV header: epoch,train_loss,val_loss,sens,prec,f1,prauc,auc

Dependencies: None
"""

import csv
import math
from dataclasses import dataclass, field
from typing import List, Optional

HISTORY_FIELDS = ('epoch', 'train_loss', 'val_loss', 'sens', 'prec', 'f1', 'prauc', 'auc')


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    sens: float
    prec: float
    f1: float
    prauc: Optional[float]
    auc: Optional[float]


@dataclass
class TrainHistory:
    """One EpochRecord per completed epoch, in order."""

    records: List[EpochRecord] = field(default_factory=list)

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def __eq__(self, other):
        return isinstance(other, TrainHistory) and self.records == other.records

    def column(self, name):
        return [getattr(record, name) for record in self.records]

    def to_csv(self, path):
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(HISTORY_FIELDS)
            for record in self.records:
                writer.writerow([record.epoch] + [_fmt(getattr(record, name))
                                                  for name in HISTORY_FIELDS[1:]])

    @classmethod
    def from_csv(cls, path):
        history = cls()
        with open(path, 'r', newline='') as f:
            for row in csv.DictReader(f):
                values = {name: _parse(row[name]) for name in HISTORY_FIELDS[1:]}
                history.append(EpochRecord(epoch=int(row['epoch']), **values))
        return history


def _fmt(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'NA'
    return repr(float(value))


def _parse(text):
    return None if text in ('', 'NA') else float(text)
