"""Line-based description files.

    # comment
    [mfs]
    name = "X over P2"
    base_dim = 2
    kind = "singular"
    gram = [[1]]
    c1Y = [3]
    c1rel = [-8]
    c2rel = -8

Values are integers, double-quoted strings, or bracketed integer lists.
``kind`` may also be written bare (``kind = smooth``).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .lattice import BilinearLattice, LatticeError
from .models import (
    DelPezzoFibration,
    FanoRankOne,
    MfsDescription,
    ModelError,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    validate,
)

INT64 = (-(2**63), 2**63 - 1)

COMMON_KEYS = ("name", "base_dim")
FAMILY_KEYS = {
    0: ("degree", "eX", "index"),
    1: ("K", "d", "relK3", "eX", "twist"),
    2: ("kind", "gram", "c1Y", "eY", "c1E", "c2E", "c1rel", "c2rel"),
}
KIND_KEYS = {"smooth": ("c1E", "c2E"), "singular": ("c1rel", "c2rel")}
ALIASES = {"e": "eX"}
ALL_KEYS = set(COMMON_KEYS).union(*FAMILY_KEYS.values(), ALIASES)

# which input key to blame for a named surface violation
_SURFACE_BLAME = {"euler": "eY", "signature": "gram", "dimension": "c1Y"}

_KEY_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*")


class ParseError(ValueError):
    def __init__(self, path: str, line: int, col: int, message: str):
        self.path, self.line, self.col, self.message = path, line, col, message
        super().__init__(f"{path}:{line}:{col}: {message}")


@dataclass
class _Entry:
    value: object
    line: int
    col: int
    key_col: int = 1


def _strip_comment(text: str) -> str:
    in_str = False
    for i, ch in enumerate(text):
        if ch == '"' and (i == 0 or text[i - 1] != "\\"):
            in_str = not in_str
        elif ch == "#" and not in_str:
            return text[:i]
    return text


def _check_ints(value, fail) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, list)):
        fail("lists may only contain integers")
    if isinstance(value, int):
        if not INT64[0] <= value <= INT64[1]:
            fail("integer does not fit in 64 bits")
    else:
        for v in value:
            _check_ints(v, fail)


def _parse_value(raw: str, fail):
    raw = raw.strip()
    if not raw:
        fail("missing value")
    if re.fullmatch(r"[+-]?\d+", raw):
        v = int(raw)
        _check_ints(v, fail)
        return v
    if raw.startswith('"'):
        try:
            v = json.loads(raw)
        except json.JSONDecodeError as exc:
            fail(f"bad string: {exc.msg}")
        if not isinstance(v, str):
            fail("bad string")
        return v
    if raw.startswith("["):
        try:
            v = json.loads(raw)
        except json.JSONDecodeError as exc:
            fail(f"bad list: {exc.msg}")
        _check_ints(v, fail)
        return v
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", raw):
        return raw
    fail(f"cannot parse value {raw!r}")


def parse_text(text: str, path: str = "<string>") -> MfsDescription:
    entries: dict[str, _Entry] = {}
    header_line = None
    for lineno, full in enumerate(text.splitlines(), start=1):
        line = _strip_comment(full)
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        if line.strip().startswith("["):
            if line.strip() != "[mfs]":
                raise ParseError(path, lineno, col0, f"unknown section {line.strip()}")
            if header_line is not None:
                raise ParseError(path, lineno, col0, "only one [mfs] section is allowed")
            header_line = lineno
            continue
        m = _KEY_RE.match(line)
        if not m:
            raise ParseError(path, lineno, col0, "expected 'key = value'")
        if header_line is None:
            raise ParseError(path, lineno, col0, "key before the [mfs] header")
        key = m.group(1)
        kcol = m.start(1) + 1
        if key not in ALL_KEYS:
            raise ParseError(path, lineno, kcol, f"unknown key {key!r}")
        canon = ALIASES.get(key, key)
        if canon in entries:
            raise ParseError(path, lineno, kcol, f"duplicate key {key!r}")
        vcol = m.end() + 1

        def fail(msg, _l=lineno, _c=vcol):
            raise ParseError(path, _l, _c, msg)

        entries[canon] = _Entry(_parse_value(line[m.end():], fail), lineno, vcol, kcol)
    if header_line is None:
        raise ParseError(path, 1, 1, "missing [mfs] header")
    return _build(entries, path, header_line)


def parse(data: bytes | str, path: str = "<string>") -> MfsDescription:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(path, 1, 1, f"file is not UTF-8: {exc.reason}") from None
    return parse_text(data, path)


def parse_file(path: str) -> MfsDescription:
    with open(path, "rb") as fh:
        return parse(fh.read(), path)


def _build(entries: dict[str, _Entry], path: str, header: int) -> MfsDescription:
    def err(key: str | None, msg: str):
        if key is not None and key in entries:
            e = entries[key]
            raise ParseError(path, e.line, e.col, msg)
        raise ParseError(path, header, 1, msg)

    def get(key, kind=int, required=True):
        if key not in entries:
            if required:
                err(None, f"missing required key {key!r}")
            return None
        v = entries[key].value
        ok = {
            int: isinstance(v, int),
            str: isinstance(v, str),
            "vector": isinstance(v, list) and all(isinstance(x, int) for x in v),
            "matrix": isinstance(v, list) and all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in v),
        }[kind]
        if not ok:
            name = kind if isinstance(kind, str) else {int: "an integer", str: "a string"}[kind]
            err(key, f"{key} must be {name}")
        return v

    base = get("base_dim")
    if base not in FAMILY_KEYS:
        err("base_dim", f"base_dim must be 0, 1 or 2, got {base}")
    allowed = set(COMMON_KEYS) | set(FAMILY_KEYS[base])
    if base == 2:
        kind = get("kind", str)
        if kind not in KIND_KEYS:
            err("kind", f"kind must be 'smooth' or 'singular', got {kind!r}")
        other = "singular" if kind == "smooth" else "smooth"
        allowed -= set(KIND_KEYS[other])
    for key, e in entries.items():
        if key not in allowed:
            raise ParseError(path, e.line, e.key_col, f"key {key!r} is not used when base_dim = {base}")
    name = get("name", str, required=False)

    try:
        if base == 0:
            m = FanoRankOne(get("degree"), get("eX"), get("index", required=False), name=name)
        elif base == 1:
            d = get("d", required=False)
            m = DelPezzoFibration(
                K=get("K"),
                d=1 if d is None else d,
                relK3=get("relK3", required=False),
                eX=get("eX", required=False),
                twist=get("twist", required=False),
                name=name,
            )
        else:
            try:
                lattice = BilinearLattice(tuple(tuple(r) for r in get("gram", "matrix")))
            except LatticeError as exc:
                err("gram", str(exc))
            surface = SurfaceData(lattice, tuple(get("c1Y", "vector")), get("eY", required=False))
            a, b = KIND_KEYS[kind]
            cls = SmoothConicBundle if kind == "smooth" else SingularConicBundle
            m = cls(surface, tuple(get(a, "vector")), get(b), name=name)
        validate(m)
    except ModelError as exc:
        blame = exc.field
        if blame is None and exc.violations:
            blame = _SURFACE_BLAME.get(exc.violations[0][0], "c1Y" if base == 2 else None)
        err(blame, str(exc))
    except LatticeError as exc:
        err(None, str(exc))
    return m


def _fmt(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (tuple, list)):
        return json.dumps(_listify(v), separators=(", ", ": "))
    return str(int(v))


def _listify(v):
    return [_listify(x) for x in v] if isinstance(v, (tuple, list)) else v


def dump(m: MfsDescription) -> str:
    """Canonical text for a description; ``parse(dump(m)) == m``."""
    pairs: list[tuple[str, object]] = []
    if m.name is not None:
        pairs.append(("name", m.name))
    if isinstance(m, FanoRankOne):
        pairs += [("base_dim", 0), ("degree", m.degree), ("eX", m.eX)]
        if m.index is not None:
            pairs.append(("index", m.index))
    elif isinstance(m, DelPezzoFibration):
        pairs += [("base_dim", 1), ("K", m.K), ("d", m.d)]
        for key in ("relK3", "eX", "twist"):
            if getattr(m, key) is not None:
                pairs.append((key, getattr(m, key)))
    else:
        smooth = isinstance(m, SmoothConicBundle)
        s = m.surface
        pairs += [
            ("base_dim", 2),
            ("kind", "smooth" if smooth else "singular"),
            ("gram", s.lattice.gram),
            ("c1Y", s.c1Y),
            ("eY", s.eY),
        ]
        if smooth:
            pairs += [("c1E", m.c1E), ("c2E", m.c2E)]
        else:
            pairs += [("c1rel", m.c1rel), ("c2rel", m.c2rel)]
    return "[mfs]\n" + "".join(f"{k} = {_fmt(v)}\n" for k, v in pairs)
