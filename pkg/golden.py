"""
JSON store for the reference table of topological types
"""
import json
import os

import config
from utils import RealPairsError, logger


class GoldenTableMissing(RealPairsError):
    """Reference table file is absent or unreadable"""


class GoldenMismatch(RealPairsError):
    """Computed table differs from the reference table"""


class GoldenTable:
    """Reference rows keyed by self-intersection, loaded from data/golden_table.json"""

    def __init__(self, path=None):
        self.path = path or config.GOLDEN_TABLE_PATH
        data = self._load_json(self.path, None)
        if data is None:
            raise GoldenTableMissing(f"golden table not found at {self.path}", path=self.path)
        self.description = data.get("description", "")
        self.bound = data.get("bound", config.DEFAULT_BOUND)
        self.rows = data.get("rows", [])
        logger.info(f"Golden table initialized: {len(self.rows)} rows from {self.path}")

    def _load_json(self, filepath, default=None):
        """Load JSON file, return default if it doesn't exist"""
        try:
            if os.path.exists(filepath):
                with open(filepath, 'r', encoding='utf-8') as f:
                    return json.load(f)
            return default
        except Exception as e:
            logger.error(f"Error loading {filepath}: {e}")
            return default

    def expected(self, e):
        """
        Family labels the reference table lists for one self-intersection

        Args:
            e: Self-intersection

        Returns:
            list: Family labels, or None when no row covers e
        """
        for row in self.rows:
            if "at" in row and row["at"] == e:
                return list(row["families"])
            if "from" in row and e >= row["from"] and (e - row["from"]) % row.get("step", 1) == 0:
                return list(row["families"])
        return None

    def compare(self, table):
        """
        Field-by-field comparison with a computed table

        Args:
            table: enumeration.TypeTable

        Returns:
            list: One {"e", "expected", "actual"} record per differing row
        """
        differences = []
        for e, labels in sorted(table.labels().items()):
            expected = self.expected(e)
            if expected is None or sorted(expected) != sorted(labels):
                differences.append({"e": e, "expected": expected, "actual": labels})
        if differences:
            logger.warning(f"Golden comparison: {len(differences)} rows differ")
        else:
            logger.info(f"Golden comparison: all {len(table.rows)} rows match")
        return differences

