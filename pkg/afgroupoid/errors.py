import logging
import re
from typing import Optional

# Предопределенные типы ошибок
ERROR_TYPES = {
    "invalid_diagram": "afgroupoid/errors/invalid-diagram",
    "shape_mismatch": "afgroupoid/errors/shape-mismatch",
    "zero_column": "afgroupoid/errors/zero-column",
    "zero_row": "afgroupoid/errors/zero-row",
    "negative_entry": "afgroupoid/errors/negative-entry",
    "level_out_of_range": "afgroupoid/errors/level-out-of-range",
    "vertex_out_of_range": "afgroupoid/errors/vertex-out-of-range",
    "depth_too_shallow": "afgroupoid/errors/depth-too-shallow",
    "diagram_mismatch": "afgroupoid/errors/diagram-mismatch",
    "invalid_partial_map": "afgroupoid/errors/invalid-partial-map",
    "invalid_generator_system": "afgroupoid/errors/invalid-generator-system",
    "conditions_violated": "afgroupoid/errors/conditions-violated",
    "undefined_on_cylinder": "afgroupoid/errors/undefined-on-cylinder",
    "cylinder_straddles_rules": "afgroupoid/errors/cylinder-straddles-rules",
    "unknown_generator": "afgroupoid/errors/unknown-generator",
    "level_unavailable": "afgroupoid/errors/level-unavailable",
    "invalid_group": "afgroupoid/errors/invalid-group",
    "basis_unverified": "afgroupoid/errors/basis-assumption-unverified",
    "index_out_of_range": "afgroupoid/errors/index-out-of-range",
    "length_mismatch": "afgroupoid/errors/length-mismatch",
    "divisibility_violated": "afgroupoid/errors/divisibility-violated",
    "parse_error": "afgroupoid/errors/parse-error",
    "usage_error": "afgroupoid/errors/usage-error",
    "internal_error": "afgroupoid/errors/internal-error",
}


class AFGroupoidError(Exception):
    """Базовое исключение библиотеки: тип, заголовок, детали и место ошибки"""

    error_type = ERROR_TYPES["internal_error"]
    title = "Internal Error"

    def __init__(
        self,
        detail: str,
        level: Optional[int] = None,
        row: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.detail = detail
        self.level = level
        self.row = row
        self.column = column
        super().__init__(detail)

    def location(self) -> dict:
        location = {}
        if self.level is not None:
            location["level"] = self.level
        if self.row is not None:
            location["row"] = self.row
        if self.column is not None:
            location["column"] = self.column
        return location


class InvalidDiagram(AFGroupoidError):
    error_type = ERROR_TYPES["invalid_diagram"]
    title = "Invalid Diagram"


class ShapeMismatch(InvalidDiagram):
    error_type = ERROR_TYPES["shape_mismatch"]
    title = "Shape Mismatch"


class ZeroColumn(InvalidDiagram):
    error_type = ERROR_TYPES["zero_column"]
    title = "Zero Column"


class ZeroRow(InvalidDiagram):
    error_type = ERROR_TYPES["zero_row"]
    title = "Zero Row"


class NegativeEntry(InvalidDiagram):
    error_type = ERROR_TYPES["negative_entry"]
    title = "Negative Entry"


class LevelOutOfRange(AFGroupoidError):
    error_type = ERROR_TYPES["level_out_of_range"]
    title = "Level Out Of Range"


class VertexOutOfRange(AFGroupoidError):
    error_type = ERROR_TYPES["vertex_out_of_range"]
    title = "Vertex Out Of Range"


class DepthTooShallow(AFGroupoidError):
    error_type = ERROR_TYPES["depth_too_shallow"]
    title = "Depth Too Shallow"


class DiagramMismatch(AFGroupoidError):
    error_type = ERROR_TYPES["diagram_mismatch"]
    title = "Diagram Mismatch"


class InvalidPartialMap(AFGroupoidError):
    error_type = ERROR_TYPES["invalid_partial_map"]
    title = "Invalid Partial Map"


class InvalidGeneratorSystem(AFGroupoidError):
    error_type = ERROR_TYPES["invalid_generator_system"]
    title = "Invalid Generator System"


class ConditionsViolated(AFGroupoidError):
    error_type = ERROR_TYPES["conditions_violated"]
    title = "Conditions Violated"


class UndefinedOnCylinder(AFGroupoidError):
    error_type = ERROR_TYPES["undefined_on_cylinder"]
    title = "Undefined On Cylinder"


class CylinderStraddlesRules(UndefinedOnCylinder):
    """Отображение определено лишь на части цилиндра или переводит его не в один цилиндр"""

    error_type = ERROR_TYPES["cylinder_straddles_rules"]
    title = "Cylinder Straddles Rules"


class UnknownGenerator(AFGroupoidError):
    error_type = ERROR_TYPES["unknown_generator"]
    title = "Unknown Generator"


class LevelUnavailable(AFGroupoidError):
    error_type = ERROR_TYPES["level_unavailable"]
    title = "Level Unavailable"


class InvalidGroup(AFGroupoidError):
    error_type = ERROR_TYPES["invalid_group"]
    title = "Invalid Group"


class BasisAssumptionUnverified(AFGroupoidError):
    error_type = ERROR_TYPES["basis_unverified"]
    title = "Basis Assumption Unverified"


class IndexOutOfRange(AFGroupoidError):
    error_type = ERROR_TYPES["index_out_of_range"]
    title = "Index Out Of Range"


class LengthMismatch(AFGroupoidError):
    error_type = ERROR_TYPES["length_mismatch"]
    title = "Length Mismatch"


class DivisibilityViolated(AFGroupoidError):
    error_type = ERROR_TYPES["divisibility_violated"]
    title = "Divisibility Violated"


class ParseError(AFGroupoidError):
    error_type = ERROR_TYPES["parse_error"]
    title = "Parse Error"

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")

    def location(self) -> dict:
        return {"line": self.line}


class UsageError(AFGroupoidError):
    error_type = ERROR_TYPES["usage_error"]
    title = "Usage Error"


class ErrorReport:
    """Стандартизированный отчет об ошибке для CLI"""

    def __init__(
        self,
        type: str,
        title: str,
        detail: str,
        command: str,
        location: dict,
    ):
        self.type = type
        self.title = title
        self.detail = detail
        self.command = command
        self.location = location

    def dict(self):
        return {
            "type": self.type,
            "title": self.title,
            "detail": self.detail,
            "command": self.command,
            "location": self.location,
        }


def create_error_report(exc: Exception, command: str) -> dict:
    """Создание отчета об ошибке; неизвестные исключения не раскрывают деталей"""
    if isinstance(exc, AFGroupoidError):
        report = ErrorReport(
            type=exc.error_type,
            title=exc.title,
            detail=exc.detail,
            command=command,
            location=exc.location(),
        )
    else:
        report = ErrorReport(
            type=ERROR_TYPES["internal_error"],
            title=AFGroupoidError.title,
            detail="An unexpected error occurred",
            command=command,
            location={},
        )
    return report.dict()


class LongIntegerFilter(logging.Filter):
    """Фильтр, сокращающий очень длинные целые числа в логах"""

    MAX_DIGITS = 24

    def filter(self, record):
        message = record.getMessage()
        pattern = rf"-?\d{{{self.MAX_DIGITS + 1},}}"
        if re.search(pattern, message):
            record.msg = re.sub(pattern, self._abbreviate, message)
            record.args = ()
        return True

    @staticmethod
    def _abbreviate(match):
        digits = match.group(0)
        return f"{digits[:6]}...{digits[-6:]}({len(digits.lstrip('-'))} digits)"


def setup_logging(level: str = "WARNING"):
    """Настройка логирования пакета (stderr, отчеты не затрагиваются)"""
    logger = logging.getLogger("afgroupoid")
    logger.setLevel(level.upper())
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    for handler in logger.handlers:
        if not any(isinstance(f, LongIntegerFilter) for f in handler.filters):
            handler.addFilter(LongIntegerFilter())
    return logger
