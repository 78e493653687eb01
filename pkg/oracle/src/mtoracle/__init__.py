"""Independent numerical verifier for level-two iterated-integral periods."""

from .errors import (
    AccelerationError,
    BadWord,
    DivergentIndex,
    OracleError,
    TableError,
)
from .relations import RelationResult, eval_expression, find_relation
from .sums import eval_family, eval_word, parse_word
from .table import (
    TABLE_VERSION,
    decimal_str,
    emit_period_table,
    eval_numeric,
    load_table,
    read_words_file,
    table_mismatches,
    write_table,
)

__all__ = [
    "AccelerationError",
    "BadWord",
    "DivergentIndex",
    "OracleError",
    "RelationResult",
    "TABLE_VERSION",
    "TableError",
    "decimal_str",
    "emit_period_table",
    "eval_expression",
    "eval_family",
    "eval_numeric",
    "eval_word",
    "find_relation",
    "load_table",
    "parse_word",
    "read_words_file",
    "table_mismatches",
    "write_table",
]
