# flake8: noqa

from .emit.manifest import emit_manifest
from .emit.report import (
    emit_histogram,
    emit_report,
    emit_summary,
    emit_tradeoff,
    read_report,
)
