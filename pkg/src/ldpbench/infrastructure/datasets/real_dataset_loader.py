"""Loaders for the real datasets: Adult (age), Kosarak and BMS-POS.

The raw files are user-supplied; every loader is a pure function of the file's
bytes.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from ldpbench.domain.entities.population import Population
from ldpbench.domain.exceptions import DatasetError
from ldpbench.domain.value_objects.domain_spec import DomainSpec
from shared.infrastructure.logging import log_event

ADULT_MIN_AGE = 17
ADULT_MAX_AGE = 90
ADULT_DOMAIN_SIZE = ADULT_MAX_AGE - ADULT_MIN_AGE + 1
ADULT_AGE_COLUMN = "age"
DEFAULT_MAX_SKIP_FRACTION = 0.5

KOSARAK_TOP_K = 128
BMS_POS_TOP_K = 256

_ITEM_SEPARATOR = re.compile(r"[,\s]+")

logger = logging.getLogger(__name__)


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetError(f"dataset file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot read dataset file {path}: {exc}") from exc


class RealDatasetLoader:
    """Turns raw dataset files into populations over 0..d-1."""

    def __init__(self, max_skip_fraction: float = DEFAULT_MAX_SKIP_FRACTION) -> None:
        self._max_skip_fraction = max_skip_fraction

    def load_adult(self, path: Path, name: str | None = None) -> Population:
        """Ages 17..90 of a CSV with an ``age`` column, mapped to age - 17.

        Rows whose age is missing, non-integral or out of range are skipped and
        counted in ``Population.skipped``.

        Raises:
            DatasetError: If the file is missing or empty, has no age column, or
                more than ``max_skip_fraction`` of its rows are skipped.
        """
        try:
            frame = pd.read_csv(path, skipinitialspace=True, dtype=str)
        except FileNotFoundError:
            raise DatasetError(f"dataset file not found: {path}") from None
        except pd.errors.EmptyDataError:
            raise DatasetError(f"dataset file is empty: {path}") from None
        except (OSError, pd.errors.ParserError, UnicodeDecodeError) as exc:
            raise DatasetError(f"cannot parse {path}: {exc}") from exc

        columns = {str(column).strip().lower(): column for column in frame.columns}
        if ADULT_AGE_COLUMN not in columns:
            raise DatasetError(f"{path} has no {ADULT_AGE_COLUMN!r} column")
        if frame.empty:
            raise DatasetError(f"dataset file has no records: {path}")

        ages = pd.to_numeric(frame[columns[ADULT_AGE_COLUMN]], errors="coerce")
        valid = (
            ages.notna()
            & (ages == ages.round())
            & ages.between(ADULT_MIN_AGE, ADULT_MAX_AGE)
        )
        skipped = int((~valid).sum())
        if skipped > self._max_skip_fraction * len(frame) or not valid.any():
            raise DatasetError(
                f"{path}: {skipped} of {len(frame)} records have no usable age"
            )
        if skipped:
            log_event(
                logger,
                logging.WARNING,
                "Skipped Adult records without a usable age",
                event="dataset_rows_skipped",
                path=str(path),
                skipped=skipped,
                total=len(frame),
            )

        values = ages[valid].to_numpy(dtype=np.int64) - ADULT_MIN_AGE
        return Population(
            values, DomainSpec(ADULT_DOMAIN_SIZE), name or path.stem, skipped=skipped
        )

    def load_transactions(
        self, path: Path, top_k: int = KOSARAK_TOP_K, name: str | None = None
    ) -> Population:
        """One transaction per line, items separated by spaces or commas."""
        return self.population_from_transactions(
            self._parse_lines(path), top_k, name or path.stem
        )

    def load_bms_pos(
        self, path: Path, top_k: int = BMS_POS_TOP_K, name: str | None = None
    ) -> Population:
        """(transaction id, item id) pairs, grouped by transaction id.

        Falls back to one transaction per line when any row is not exactly two
        integer fields.
        """
        transactions = self._parse_pairs(path)
        if transactions is None:
            transactions = self._parse_lines(path)
        return self.population_from_transactions(transactions, top_k, name or path.stem)

    def population_from_transactions(
        self, transactions: Sequence[Sequence[int]], top_k: int, name: str
    ) -> Population:
        """Map every user to their most frequent item among the top_k items.

        The top_k items by global count (ties: smaller item id) are renumbered
        0..top_k-1 in that order. A user's value is their most frequent kept
        item (ties: smaller new id); users without a kept item are dropped.
        A domain of one item is padded to d = 2.

        Raises:
            DatasetError: If top_k exceeds the number of distinct items or no
                user keeps an item.
        """
        if top_k < 1:
            raise DatasetError(f"top_k must be >= 1, got {top_k}")
        counts = Counter(item for transaction in transactions for item in transaction)
        if top_k > len(counts):
            raise DatasetError(
                f"top_k={top_k} exceeds the {len(counts)} distinct items of {name!r}"
            )

        ranked = sorted(counts.items(), key=lambda entry: (-entry[1], entry[0]))
        new_id = {item: index for index, (item, _) in enumerate(ranked[:top_k])}

        values: list[int] = []
        for transaction in transactions:
            kept = Counter(new_id[item] for item in transaction if item in new_id)
            if kept:
                values.append(min(kept, key=lambda item: (-kept[item], item)))
        if not values:
            raise DatasetError(f"no user of {name!r} has one of the top {top_k} items")

        dropped = len(transactions) - len(values)
        return Population(
            np.array(values, dtype=np.int64),
            DomainSpec(max(top_k, 2)),
            name,
            skipped=dropped,
        )

    def _parse_lines(self, path: Path) -> list[list[int]]:
        transactions: list[list[int]] = []
        for line_number, line in enumerate(_read_text(path).splitlines(), start=1):
            tokens = [token for token in _ITEM_SEPARATOR.split(line.strip()) if token]
            try:
                transactions.append([int(token) for token in tokens])
            except ValueError:
                raise DatasetError(
                    f"{path}:{line_number}: item ids must be integers"
                ) from None
        if not transactions:
            raise DatasetError(f"dataset file is empty: {path}")
        return transactions

    def _parse_pairs(self, path: Path) -> list[list[int]] | None:
        """Transactions of a pairs file, or None when the file is not one."""
        try:
            frame = pd.read_csv(
                path, header=None, sep=r"[,\s]+", engine="python", dtype=str
            )
        except FileNotFoundError:
            raise DatasetError(f"dataset file not found: {path}") from None
        except pd.errors.EmptyDataError:
            raise DatasetError(f"dataset file is empty: {path}") from None
        except pd.errors.ParserError:
            return None
        if frame.shape[1] != 2:
            return None

        pairs = frame.apply(pd.to_numeric, errors="coerce")
        if pairs.iloc[0].isna().any():
            # header row
            pairs = pairs.iloc[1:]
        if pairs.empty or pairs.isna().any().any():
            return None
        if not (pairs == pairs.round()).all().all():
            return None

        pairs = pairs.astype(np.int64)
        pairs.columns = ["transaction", "item"]
        return [
            group.tolist()
            for _, group in pairs.groupby("transaction", sort=False)["item"]
        ]
