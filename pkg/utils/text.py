"""Textual utilities for data files, config values and plain-text output."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

from collections.abc import Iterator, Mapping
from pathlib import Path

import config
from errors import DataFormatError

TRUE_WORDS = {"true", "yes", "1", "on"}
FALSE_WORDS = {"false", "no", "0", "off"}


def split_list(text: str) -> list[str]:
    """Split a comma list, dropping empty entries.

    >>> split_list("0, 0.5,,1 ")
    ['0', '0.5', '1']
    """
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_bool(text: str) -> bool:
    """
    >>> parse_bool("Yes"), parse_bool("0")
    (True, False)
    """
    word = text.strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise ValueError(f"{text!r} is not a boolean")


def tabulate_pairs(pairs: Mapping[str, object], sep: str = " = ") -> str:
    """Align key/value pairs one per line.

    >>> print(tabulate_pairs({"seed": 7, "rerank.k": 10}))
    seed     = 7
    rerank.k = 10
    """
    if not pairs:
        return ""
    width = max(len(key) for key in pairs)
    return "\n".join(f"{key:<{width}}{sep}{value}" for key, value in pairs.items())


def data_lines(path: Path) -> Iterator[tuple[int, str]]:
    """Yield (line number, line) for each non-blank, non-comment line.

    Lines are decoded one at a time so that bad bytes are reported with
    their line number.
    """
    with Path(path).open("rb") as data_file:
        for line_no, raw in enumerate(data_file, start=1):
            try:
                line = raw.decode("utf-8").rstrip("\r\n")
            except UnicodeDecodeError as err:
                raise DataFormatError(
                    f"{path}:{line_no}: not valid UTF-8 ({err.reason})"
                ) from None
            if line_no == 1:
                line = line.removeprefix("\ufeff")
            if not line.strip() or line.lstrip().startswith(config.COMMENT_PREFIX):
                continue
            yield line_no, line
