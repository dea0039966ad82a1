import logging
import re
from pathlib import Path
from typing import Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .bratteli import BratteliDiagram, dim_vector, validate
from .config import Settings
from .duality import SupernaturalScale, build_dual_system, verify_reconstruction
from .dynsys import (
    NonAFCertificate,
    canonical_system,
    check_conditions,
    find_non_af_certificate,
    odometer_generators,
    render_word,
    system_generators,
)
from .errors import InvalidDiagram, LevelUnavailable, ParseError, ShapeMismatch, UsageError
from .examples import (
    gicar_basis_change,
    gicar_binomial_column,
    gicar_cone_member,
    gicar_phi,
    gicar_recover_alpha,
)
from .ktheory import (
    DirectLimitGroup,
    LimitElement,
    VerdictKind,
    equal,
    from_diagram,
    from_system,
    matrix_rows,
    positive,
)

logger = logging.getLogger(__name__)

HEADER = "bratteli v1"
ROW_PATTERN = re.compile(r"\d+( \d+)*")
ELEMENT_PATTERN = re.compile(r"(\d+):\[(-?\d+(?:,-?\d+)*)?\]")


class DiagramFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    diagram: BratteliDiagram
    name: Optional[str] = None
    extension: Optional[str] = None

    @field_validator("name")
    def validate_name(cls, v):
        if v is not None:
            if not v.strip():
                raise ValueError("Name cannot be empty")
            if "#" in v or "\n" in v or v != v.strip():
                raise ValueError("Name must be a single line without '#'")
        return v

    @field_validator("extension")
    def validate_extension(cls, v):
        if v is not None and v not in ("repeat", "none"):
            raise ValueError("Extension must be 'repeat' or 'none'")
        return v

    def materialize(self, levels: int) -> BratteliDiagram:
        """Диаграмма ровно из levels уровней, при необходимости продолженная"""
        if levels <= self.diagram.levels:
            return self.diagram.truncate(levels)
        if self.extension != "repeat":
            raise LevelUnavailable(
                f"file describes {self.diagram.levels} levels, {levels} requested", level=levels
            )
        last = self.diagram.edge_matrices[-1]
        extra = (last,) * (levels - self.diagram.levels)
        return BratteliDiagram(edge_matrices=self.diagram.edge_matrices + extra)


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(token) for token in text.strip("[]").split(",") if token.strip())
    except ValueError:
        raise ValueError(f"{text!r} is not a comma separated list of integers")


def parse_element(text: str) -> LimitElement:
    """Литерал элемента 'LEVEL:[v1,v2,...]'"""
    match = ELEMENT_PATTERN.fullmatch(text.replace(" ", ""))
    if match is None:
        raise UsageError(f"element {text!r} is not of the form LEVEL:[v1,v2,...]")
    level, values = match.groups()
    return LimitElement(int(level), _vector(values or ""))


def parse_diagram(text: str) -> DiagramFile:
    """Разбор файла диаграммы; заголовок может быть опущен, если файл начинается с level"""
    name = None
    extension = None
    header_seen = False
    sections: list[tuple[int, list[tuple[int, ...]]]] = []
    last_line = 1
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last_line = lineno
        if not header_seen:
            header_seen = True
            if line == HEADER:
                continue
            if not line.startswith("level"):
                raise ParseError(lineno, f"expected header {HEADER!r}")
        if extension is not None:
            raise ParseError(lineno, "nothing may follow the extend line")
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "name":
            if sections or name is not None or not rest:
                raise ParseError(lineno, "name must appear once, before the first level")
            name = rest
        elif keyword == "level":
            if sections and not sections[-1][1]:
                raise ParseError(sections[-1][0], "empty edge section")
            expected = len(sections) + 1
            if rest != str(expected):
                raise ParseError(lineno, f"expected 'level {expected}'")
            sections.append((lineno, []))
        elif keyword == "extend":
            if rest not in ("repeat", "none"):
                raise ParseError(lineno, "extend must be 'repeat' or 'none'")
            if not sections:
                raise ParseError(lineno, "extend before any level")
            extension = rest
        else:
            if not sections:
                raise ParseError(lineno, "matrix row outside a level section")
            if not ROW_PATTERN.fullmatch(" ".join(line.split())):
                raise ParseError(lineno, "row must hold non-negative decimal integers")
            sections[-1][1].append(tuple(int(token) for token in line.split()))
    if not sections:
        raise ParseError(last_line, "empty edge section")
    if not sections[-1][1]:
        raise ParseError(sections[-1][0], "empty edge section")
    diagram = BratteliDiagram(edge_matrices=tuple(tuple(rows) for _, rows in sections))
    validate(diagram)
    if extension == "repeat":
        last = diagram.edge_matrices[-1]
        if len(last) != len(last[0]):
            raise ShapeMismatch(
                "extend repeat needs a square last matrix", level=diagram.levels
            )
    return DiagramFile(diagram=diagram, name=name, extension=extension)


def serialize_diagram(source: Union[BratteliDiagram, DiagramFile]) -> str:
    file = source if isinstance(source, DiagramFile) else DiagramFile(diagram=source)
    lines = [HEADER]
    if file.name is not None:
        lines.append(f"name {file.name}")
    for n, matrix in enumerate(file.diagram.edge_matrices, start=1):
        lines.append(f"level {n}")
        lines.extend(" ".join(str(x) for x in row) for row in matrix)
    if file.extension is not None:
        lines.append(f"extend {file.extension}")
    return "\n".join(lines) + "\n"


def load_diagram(path: str) -> DiagramFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    return parse_diagram(text)


def _fmt(values) -> str:
    if isinstance(values, (tuple, list)):
        return "[" + ",".join(_fmt(v) for v in values) + "]"
    return str(values)


class Report(BaseModel):
    """Детерминированный отчет команды: эхо аргументов и пары ключ-значение"""

    model_config = ConfigDict(frozen=True)

    command: str
    arguments: tuple[tuple[str, str], ...] = ()
    entries: tuple[tuple[str, str], ...] = ()
    exit_code: int = 0

    def render(self, porcelain: bool = False) -> str:
        if porcelain:
            lines = [f"command={self.command}"]
            lines += [f"arg.{key}={value}" for key, value in self.arguments]
            lines += [f"{key}={value}" for key, value in self.entries]
            lines.append(f"exit={self.exit_code}")
        else:
            echo = " ".join(f"--{key} {value}" for key, value in self.arguments)
            lines = [f"{self.command} {echo}".rstrip()]
            lines += [f"  {key}: {value}" for key, value in self.entries]
        return "\n".join(lines) + "\n"


def render_error(error: dict, porcelain: bool = False) -> str:
    fields = [("error", error["type"]), ("title", error["title"]), ("detail", error["detail"])]
    fields += [(f"location.{k}", str(v)) for k, v in sorted(error["location"].items())]
    if porcelain:
        lines = [f"command={error['command']}"] + [f"{k}={v}" for k, v in fields]
    else:
        lines = [f"{error['command']}: {error['title']}"] + [f"  {k}: {v}" for k, v in fields[2:]]
    return "\n".join(lines) + "\n"


class ValidateRequest(BaseModel):
    diagram: str


class K0Request(BaseModel):
    diagram: str
    levels: int

    @field_validator("levels")
    def validate_levels(cls, v):
        if v < 1:
            raise ValueError("--levels must be at least 1")
        return v


class EqRequest(BaseModel):
    diagram: str
    a: str
    b: str
    horizon: Optional[int] = None


class PosRequest(BaseModel):
    diagram: str
    element: str
    horizon: Optional[int] = None


class CheckAfRequest(BaseModel):
    target: str
    base: int = 2
    word_len: Optional[int] = None
    depth: Optional[int] = None
    levels: Optional[int] = None

    @field_validator("base")
    def validate_base(cls, v):
        if v < 2:
            raise ValueError("--base must be at least 2")
        return v


class GicarRequest(BaseModel):
    lemma: Optional[int] = None
    cone: Optional[int] = None
    beta: Optional[str] = None
    phi: Optional[int] = None
    alpha: Optional[str] = None

    @model_validator(mode="after")
    def validate_mode(self):
        modes = [m for m in (self.lemma, self.cone, self.phi) if m is not None]
        if len(modes) != 1:
            raise ValueError("exactly one of --lemma, --cone, --phi is required")
        if modes[0] < 0:
            raise ValueError("level must be non-negative")
        if self.cone is not None and self.beta is None:
            raise ValueError("--cone needs --beta")
        if self.phi is not None and self.alpha is None:
            raise ValueError("--phi needs --alpha")
        return self


class DualRequest(BaseModel):
    scale: str
    depth: int
    verify: bool = False
    repeat: bool = False
    horizon: Optional[int] = None

    @field_validator("depth")
    def validate_depth(cls, v):
        if v < 1:
            raise ValueError("--depth must be at least 1")
        return v


def _arguments(request: BaseModel) -> tuple[tuple[str, str], ...]:
    return tuple(
        (key.replace("_", "-"), str(value))
        for key, value in request.model_dump().items()
        if value is not None and value is not False
    )


def run_validate(request: ValidateRequest, settings: Settings) -> Report:
    try:
        file = load_diagram(request.diagram)
    except InvalidDiagram as exc:
        logger.debug("invalid diagram %s: %s", request.diagram, exc.detail)
        entries = [("status", "invalid"), ("error", exc.error_type), ("detail", exc.detail)]
        entries += [(f"location.{k}", str(v)) for k, v in sorted(exc.location().items())]
        return Report(
            command="validate", arguments=_arguments(request), entries=tuple(entries), exit_code=1
        )
    diagram = file.diagram
    entries = [("status", "valid"), ("levels", str(diagram.levels))]
    if file.name is not None:
        entries.append(("name", file.name))
    if file.extension is not None:
        entries.append(("extension", file.extension))
    entries += [(f"dim.{n}", _fmt(dim_vector(diagram, n))) for n in range(diagram.levels + 1)]
    return Report(command="validate", arguments=_arguments(request), entries=tuple(entries))


def run_k0(request: K0Request, settings: Settings) -> Report:
    top = request.levels - 1
    diagram = load_diagram(request.diagram).materialize(top)
    group = from_system(canonical_system(diagram, top), top)
    entries = [(f"matrix.{n}", _fmt(matrix_rows(group.matrix(n)))) for n in range(top)]
    entries += [(f"unit.{n}", _fmt(group.unit(n))) for n in range(top + 1)]
    entries.append(("injective", str(group.injective_forever).lower()))
    return Report(command="k0", arguments=_arguments(request), entries=tuple(entries))


def _group_of(path: str):
    file = load_diagram(path)
    return from_diagram(file.diagram, extension=file.extension or "none")


def _horizon(horizon: Optional[int], group: DirectLimitGroup, settings: Settings) -> int:
    """Явный --horizon, иначе значение по умолчанию, не выше числа заданных уровней"""
    if horizon is not None:
        return horizon
    available = group.available_levels
    if available is None:
        return settings.default_horizon
    return min(settings.default_horizon, available)


def run_eq(request: EqRequest, settings: Settings) -> Report:
    group = _group_of(request.diagram)
    horizon = _horizon(request.horizon, group, settings)
    verdict = equal(group, parse_element(request.a), parse_element(request.b), horizon)
    return Report(
        command="eq",
        arguments=_arguments(request),
        entries=(("verdict", str(verdict)),),
        exit_code=0 if verdict.kind is VerdictKind.EQUAL else 1,
    )


def run_pos(request: PosRequest, settings: Settings) -> Report:
    group = _group_of(request.diagram)
    horizon = _horizon(request.horizon, group, settings)
    verdict = positive(group, parse_element(request.element), horizon)
    ok = verdict.kind in (VerdictKind.POSITIVE, VerdictKind.ZERO)
    return Report(
        command="pos",
        arguments=_arguments(request),
        entries=(("verdict", str(verdict)),),
        exit_code=0 if ok else 1,
    )


def run_check_af(request: CheckAfRequest, settings: Settings) -> Report:
    word_len = request.word_len or settings.default_word_len
    depth = request.depth or settings.default_depth
    entries = []
    if request.target == "odometer":
        generators = odometer_generators((request.base,) * depth)
    else:
        levels = request.levels or depth
        diagram = load_diagram(request.target).materialize(max(levels, depth))
        system = canonical_system(diagram, levels)
        conditions = check_conditions(system, levels)
        entries.append(("conditions", "hold" if conditions.passed else conditions.describe()))
        generators = system_generators(system)
    result = find_non_af_certificate(generators, word_len, depth)
    if isinstance(result, NonAFCertificate):
        entries += [
            ("result", "certificate"),
            ("word", render_word(result.word)),
            ("B", str(result.base)),
            ("witness", str(result.witness)),
            ("witness_image", str(result.witness_image)),
        ]
        exit_code = 1
    else:
        entries += [
            ("result", "not_found"),
            ("searched.word_len", str(result.max_word_len)),
            ("searched.depth", str(result.max_depth)),
        ]
        exit_code = 0
    return Report(
        command="check-af",
        arguments=_arguments(request),
        entries=tuple(entries),
        exit_code=exit_code,
    )


def _vector_flag(text: str, flag: str) -> tuple[int, ...]:
    try:
        return _vector(text)
    except ValueError:
        raise UsageError(f"{flag} {text!r} is not a comma separated list of integers")


def run_gicar(request: GicarRequest, settings: Settings) -> Report:
    entries = []
    exit_code = 0
    if request.lemma is not None:
        for n in range(1, request.lemma + 1):
            basis = gicar_basis_change(n)
            for r in range(1, n + 2):
                column = gicar_binomial_column(n, r)
                product = tuple(int(x) for x in basis.col(r - 1))
                holds = column == product
                exit_code = exit_code or int(not holds)
                entries.append((f"lemma.{n}.{r}", f"{_fmt(column)} {'ok' if holds else 'FAIL'}"))
        entries.append(("lemma", "holds" if exit_code == 0 else "fails"))
    elif request.cone is not None:
        beta = _vector_flag(request.beta, "--beta")
        member = gicar_cone_member(request.cone, beta)
        entries += [
            ("member", str(member).lower()),
            ("alpha", _fmt(gicar_recover_alpha(request.cone, beta))),
        ]
        exit_code = 0 if member else 1
    else:
        alpha = _vector_flag(request.alpha, "--alpha")
        function = gicar_phi(request.phi, alpha)
        entries += [
            ("beta", _fmt(function.padded(request.phi + 1))),
            ("limit", str(function.limit_value())),
        ]
    return Report(
        command="gicar", arguments=_arguments(request), entries=tuple(entries), exit_code=exit_code
    )


def run_dual(request: DualRequest, settings: Settings) -> Report:
    scale = SupernaturalScale.parse(request.scale, "repeat" if request.repeat else "none")
    system = build_dual_system(scale, request.depth)
    entries = [(f"ratio.{n}", str(scale.ratio(n))) for n in range(1, request.depth + 1)]
    entries += [(f"unit.{n}", str(scale.unit(n))) for n in range(request.depth + 1)]
    conditions = check_conditions(system, request.depth)
    entries.append(("conditions", "hold" if conditions.passed else conditions.describe()))
    exit_code = 0 if conditions.passed else 1
    if request.verify:
        horizon = request.horizon or request.depth
        verified = verify_reconstruction(scale, request.depth, horizon)
        entries.append(("reconstruction", str(verified).lower()))
        exit_code = exit_code or int(not verified)
    return Report(
        command="dual", arguments=_arguments(request), entries=tuple(entries), exit_code=exit_code
    )


COMMANDS: dict[str, tuple[type[BaseModel], Callable[..., Report]]] = {
    "validate": (ValidateRequest, run_validate),
    "k0": (K0Request, run_k0),
    "eq": (EqRequest, run_eq),
    "pos": (PosRequest, run_pos),
    "check-af": (CheckAfRequest, run_check_af),
    "gicar": (GicarRequest, run_gicar),
    "dual": (DualRequest, run_dual),
}


def run(command: str, flags: dict, settings: Optional[Settings] = None) -> Report:
    """Выполняет подкоманду; flags - словарь значений флагов без глобальных опций"""
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    schema, handler = COMMANDS[command]
    request = schema.model_validate(flags)
    logger.info("running %s", command)
    return handler(request, settings or Settings())
