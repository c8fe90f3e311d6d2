"""The ZeroToHero game: levels, sessions, attempt evaluation, skip budget,
and measurement logging.

Sessions are event-sourced: every mutation appends a JSONL event with an
ISO-8601 timestamp, and replaying a log reproduces the exact session state.
Timing is taken from the server-side event timestamps only.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import IO, Optional

from geckograph.infer import (
    DEFAULT_FIXITIES,
    ExprSyntaxError,
    TypeError_,
    UnboundName,
    canonicalize,
    infer,
    parse_expr,
    skolemize,
    subsumes,
    unify,
)
from geckograph.syntax import (
    App,
    Fun,
    child_at,
    ParseError,
    Scheme,
    TypeExpr,
    Var,
    free_vars,
    fun_spine,
    parse_scheme,
    print_scheme,
    print_type,
    rename_vars,
)
from geckograph.typediff import DiffReport, diff

SKIP_BUDGET = 4
EXPERIENCE_LEVELS = ("beginner", "familiar", "knowledgeable", "expert")


class LevelFormatError(Exception):
    def __init__(self, number, field_name: str, reason: str):
        super().__init__(f"level {number}: bad {field_name}: {reason}")
        self.number = number
        self.field = field_name


class NoSkipsRemaining(Exception):
    pass


class SessionComplete(Exception):
    pass


class SessionNotFound(Exception):
    pass


class BudgetExceeded(Exception):
    def __init__(self, explored: int):
        super().__init__(f"synthesis budget exhausted after {explored} terms")
        self.explored = explored


# ---------------------------------------------------------------------------
# Levels


@dataclass
class Level:
    number: int
    title: str
    target: Scheme
    target_text: str
    available: list[tuple[str, Scheme]]
    available_texts: list[tuple[str, str]]
    reference_solution: Optional[str] = None
    solution_verified: bool = False

    def env(self) -> dict[str, Scheme]:
        return {name: scheme for name, scheme in self.available}

    def fixities(self) -> dict[str, tuple[str, int]]:
        return {
            op: fix
            for op, fix in DEFAULT_FIXITIES.items()
            if any(name == op for name, _ in self.available)
        }


def _bare_name(name: str) -> str:
    # "($)" and "(.)" are stored with parens for display; the engine keys on
    # the bare operator symbol
    return name[1:-1] if name.startswith("(") and name.endswith(")") else name


def default_level_path() -> Path:
    return Path(str(resources.files("geckograph") / "data" / "levels.json"))


def load_levels(source: Optional[str | Path] = None) -> list[Level]:
    path = Path(source) if source is not None else default_level_path()
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise LevelFormatError("?", "file", str(e))
    levels: list[Level] = []
    seen_numbers = set()
    for entry in raw:
        number = entry.get("number")
        if not isinstance(number, int) or not 1 <= number <= 10:
            raise LevelFormatError(number, "number", "must be an integer 1-10")
        if number in seen_numbers:
            raise LevelFormatError(number, "number", "duplicate level number")
        seen_numbers.add(number)
        try:
            target = parse_scheme(entry["target"])
        except (KeyError, ParseError) as e:
            raise LevelFormatError(number, "target", str(e))
        available = []
        available_texts = []
        names = set()
        for fn in entry.get("functions", []):
            name = _bare_name(fn.get("name", ""))
            if not name or name in names:
                raise LevelFormatError(number, "functions", f"bad or duplicate name {name!r}")
            names.add(name)
            try:
                scheme = parse_scheme(fn["type"])
            except (KeyError, ParseError) as e:
                raise LevelFormatError(number, "functions", f"{name}: {e}")
            available.append((name, scheme))
            available_texts.append((fn["name"], fn["type"]))
        level = Level(
            number=number,
            title=entry.get("title", f"Level {number}"),
            target=target,
            target_text=entry["target"],
            available=available,
            available_texts=available_texts,
            reference_solution=entry.get("solution"),
        )
        level.solution_verified = _check_solution(level)
        levels.append(level)
    levels.sort(key=lambda l: l.number)
    return levels


def _check_solution(level: Level) -> bool:
    if not level.reference_solution:
        return False
    try:
        definition = parse_expr(level.reference_solution, level.fixities())
        inferred = infer(definition, level.env())
    except (ExprSyntaxError, UnboundName, TypeError_):
        return False
    return subsumes(inferred, level.target)


# ---------------------------------------------------------------------------
# Solvability search

_TERM_SIZE_LIMIT = 26  # AST nodes per candidate type; keeps the space finite

# Fully generic application/composition combinators add nothing to
# solvability: any term using them rewrites to plain applications.  Dropping
# them from the enumeration keeps the search space small without losing
# witnesses.
_REDUNDANT_COMBINATORS = frozenset(
    print_type(canonicalize(parse_scheme(t).body).body)
    for t in ("(a -> b) -> a -> b", "(b -> c) -> (a -> b) -> a -> c")
)


@dataclass
class Witness:
    code: str
    depth: int


def _type_size(t: TypeExpr) -> int:
    if isinstance(t, (App, Fun)):
        return 1 + _type_size(child_at(t, 0)) + _type_size(child_at(t, 1))
    return 1


def solvability_oracle(
    level: Level, max_depth: int, budget: int = 2_000_000
) -> Optional[Witness]:
    """Exhaustively enumerate application terms over the level's functions up
    to max_depth applications; return the smallest witness whose scheme
    subsumes the target, or None within the bound."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    target = level.target
    skolem_body = skolemize(target)
    segs = fun_spine(skolem_body)
    arg_types, goal = segs[:-1], segs[-1]
    params = ["z"] if len(arg_types) == 1 else [f"x{i + 1}" for i in range(len(arg_types))]

    # size 0 atoms: parameters at their (skolemized) target argument types,
    # plus one instantiation template per available function
    atoms: list[tuple[str, TypeExpr, bool]] = []  # (code, type, atomic)
    for p, t in zip(params, arg_types):
        atoms.append((p, t, True))
    for name, scheme in level.available:
        body = canonicalize(scheme.body).body
        if print_type(body) in _REDUNDANT_COMBINATORS:
            continue
        display = name if name.isidentifier() else f"({name})"
        atoms.append((display, body, True))

    def canon(t: TypeExpr) -> tuple[str, TypeExpr]:
        c = canonicalize(t).body
        return print_type(c), c

    frontier: list[dict[str, tuple[str, TypeExpr, bool]]] = []
    seen: set[str] = set()
    level0: dict[str, tuple[str, TypeExpr, bool]] = {}
    for code, t, atomic in atoms:
        key, ct = canon(t)
        if key not in seen:
            seen.add(key)
            level0[key] = (code, ct, atomic)
    frontier.append(level0)

    def matches_goal(t: TypeExpr) -> bool:
        try:
            unify(t, goal)
            return True
        except TypeError_:
            return False

    def finish(code: str, depth: int) -> Witness:
        full = f"zeroToHero {' '.join(params)} = {code}"
        definition = parse_expr(full, level.fixities())
        inferred = infer(definition, level.env())
        assert subsumes(inferred, target), "oracle produced a non-typechecking witness"
        return Witness(full, depth)

    for key, (code, t, _) in frontier[0].items():
        if matches_goal(t):
            return finish(code, 0)

    explored = 0
    for size in range(1, max_depth + 1):
        new: dict[str, tuple[str, TypeExpr, bool]] = {}
        for i in range(size):
            j = size - 1 - i
            for f_code, f_type, _ in frontier[i].values():
                if not isinstance(f_type, (Fun, Var)):
                    continue
                for x_code, x_type, x_atomic in frontier[j].values():
                    explored += 1
                    if explored > budget:
                        raise BudgetExceeded(explored)
                    xt = rename_vars(x_type, {v: v + "'" for v in free_vars(x_type)})
                    result = Var("?r")
                    try:
                        subst = unify(f_type, Fun(xt, result))
                    except TypeError_:
                        continue
                    rt = subst.apply(result)
                    if _type_size(rt) > _TERM_SIZE_LIMIT:
                        continue
                    key, ct = canon(rt)
                    if key in seen or key in new:
                        continue
                    arg = x_code if x_atomic else f"({x_code})"
                    new[key] = (f"{f_code} {arg}", ct, False)
        for key, (code, t, _) in new.items():
            if matches_goal(t):
                return finish(code, size)
        seen.update(new)
        frontier.append(new)
    return None


# ---------------------------------------------------------------------------
# Sessions


@dataclass
class LevelRecord:
    level: int
    outcome: str = "in_progress"  # in_progress | success | skipped
    elapsed: float = 0.0
    attempts: int = 0
    gecko_shown: bool = False


@dataclass
class Session:
    id: str
    group: int  # 1 | 2
    experience: str = "beginner"
    level_index: int = 1  # current level number; > last level means complete
    skips_remaining: int = SKIP_BUDGET
    per_level: list[LevelRecord] = field(default_factory=list)
    _level_started_at: Optional[datetime] = None

    def current_record(self) -> Optional[LevelRecord]:
        for rec in self.per_level:
            if rec.level == self.level_index:
                return rec
        return None

    def is_complete(self, total_levels: int) -> bool:
        return self.level_index > total_levels


@dataclass
class AttemptResult:
    status: str  # success | type_error | syntax_error | wrong_signature
    inferred: Optional[Scheme] = None
    diagnostics: Optional[dict] = None
    diff_report: Optional[DiffReport] = None

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.inferred is not None:
            out["inferred"] = print_scheme(self.inferred)
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics
        if self.diff_report is not None:
            out["diff"] = self.diff_report.to_json()
        return out


def treatment(group: int, level: int, always_on: bool = False) -> bool:
    """Group 1 sees the graphical notation on even levels, group 2 on odd."""
    if always_on:
        return True
    return level % 2 == 0 if group == 1 else level % 2 == 1


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class GameEngine:
    """Holds the immutable level set and all live sessions.

    Every mutation is an event appended to the log (when configured) and then
    applied to in-memory state, so `replay` rebuilds identical sessions.
    """

    def __init__(
        self,
        levels: Optional[list[Level]] = None,
        log_path: Optional[str | Path] = None,
        always_on_gecko: bool = False,
        target_name: str = "zeroToHero",
    ):
        self.levels = levels if levels is not None else load_levels()
        self.by_number = {l.number: l for l in self.levels}
        self.log_path = Path(log_path) if log_path else None
        self.always_on_gecko = always_on_gecko
        self.target_name = target_name
        self.sessions: dict[str, Session] = {}
        self._group_rr = 0
        if self.log_path and self.log_path.exists():
            self.replay(self.log_path)

    # -- event machinery ----------------------------------------------------

    def _emit(self, event: dict) -> None:
        event.setdefault("ts", _now())
        if self.log_path:
            with self.log_path.open("a") as fh:
                fh.write(json.dumps(event) + "\n")
        self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        ts = datetime.fromisoformat(event["ts"])
        if kind == "session_created":
            sess = Session(
                id=event["session"],
                group=event["group"],
                experience=event["experience"],
            )
            self.sessions[event["session"]] = sess
            return
        sess = self.sessions[event["session"]]
        if kind == "level_started":
            sess.level_index = event["level"]
            sess.per_level.append(
                LevelRecord(
                    level=event["level"],
                    gecko_shown=treatment(sess.group, event["level"], self.always_on_gecko),
                )
            )
            sess._level_started_at = ts
        elif kind == "attempt":
            rec = sess.current_record()
            if rec is not None:
                rec.attempts += 1
        elif kind == "skip":
            sess.skips_remaining -= 1
        elif kind == "level_completed":
            rec = sess.current_record()
            if rec is not None:
                rec.outcome = event["outcome"]
                if sess._level_started_at is not None:
                    rec.elapsed = (ts - sess._level_started_at).total_seconds()
            sess.level_index = event["level"] + 1
        elif kind == "session_completed":
            pass
        else:
            raise ValueError(f"unknown event {kind!r}")

    def replay(self, log_path: str | Path) -> None:
        with Path(log_path).open() as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    # -- public operations ---------------------------------------------------

    def create_session(
        self, group: Optional[int] = None, experience: str = "beginner"
    ) -> Session:
        if experience not in EXPERIENCE_LEVELS:
            raise ValueError(f"experience must be one of {EXPERIENCE_LEVELS}")
        if group is None:
            group = 1 + self._group_rr % 2
            self._group_rr += 1
        if group not in (1, 2):
            raise ValueError("group must be 1 or 2")
        sid = uuid.uuid4().hex
        ts = _now()
        self._emit({"event": "session_created", "session": sid, "group": group,
                    "experience": experience, "ts": ts})
        self._emit({"event": "level_started", "session": sid,
                    "level": self.levels[0].number, "ts": ts})
        return self.sessions[sid]

    def get_session(self, session_id: str) -> Session:
        sess = self.sessions.get(session_id)
        if sess is None:
            raise SessionNotFound(session_id)
        return sess

    def current_level(self, sess: Session) -> Level:
        level = self.by_number.get(sess.level_index)
        if level is None:
            raise SessionComplete(sess.id)
        return level

    def evaluate(self, level: Level, code: str) -> AttemptResult:
        """Check one attempt against a level, without touching any session."""
        try:
            definition = parse_expr(code, level.fixities())
        except ExprSyntaxError as e:
            return AttemptResult(
                "syntax_error",
                diagnostics={"kind": "syntax_error", "message": e.message, "offset": e.offset},
            )
        if definition.name != self.target_name:
            return AttemptResult(
                "syntax_error",
                diagnostics={
                    "kind": "syntax_error",
                    "message": f"the definition must be named {self.target_name!r}",
                    "offset": 0,
                },
            )
        try:
            inferred = infer(definition, level.env())
        except UnboundName as e:
            return AttemptResult(
                "syntax_error",
                diagnostics={"kind": "unbound_name", "name": e.name, "path": list(e.path)},
            )
        except TypeError_ as e:
            result = AttemptResult("type_error", diagnostics=e.to_json())
            left = getattr(e, "left", None)
            right = getattr(e, "right", None)
            if left is not None and right is not None:
                result.diff_report = diff(canonicalize(left), canonicalize(right))
            return result
        if subsumes(inferred, level.target):
            return AttemptResult("success", inferred=inferred)
        return AttemptResult(
            "wrong_signature",
            inferred=inferred,
            diff_report=diff(inferred, level.target),
        )

    def attempt(self, session_id: str, code: str) -> AttemptResult:
        sess = self.get_session(session_id)
        if sess.is_complete(len(self.levels)):
            raise SessionComplete(session_id)
        level = self.current_level(sess)
        result = self.evaluate(level, code)
        ts = _now()
        self._emit({"event": "attempt", "session": sess.id, "level": level.number,
                    "status": result.status, "code": code, "ts": ts})
        if result.status == "success":
            self._advance(sess, level, "success", ts)
        return result

    def skip(self, session_id: str) -> Session:
        sess = self.get_session(session_id)
        if sess.is_complete(len(self.levels)):
            raise SessionComplete(session_id)
        if sess.skips_remaining <= 0:
            raise NoSkipsRemaining(session_id)
        level = self.current_level(sess)
        ts = _now()
        self._emit({"event": "skip", "session": sess.id, "level": level.number, "ts": ts})
        self._advance(sess, level, "skipped", ts)
        return sess

    def _advance(self, sess: Session, level: Level, outcome: str, ts: str) -> None:
        self._emit({"event": "level_completed", "session": sess.id,
                    "level": level.number, "outcome": outcome, "ts": ts})
        next_number = level.number + 1
        if next_number in self.by_number:
            self._emit({"event": "level_started", "session": sess.id,
                        "level": next_number, "ts": ts})
        else:
            self._emit({"event": "session_completed", "session": sess.id, "ts": ts})

    def gecko_shown(self, sess: Session, level_number: int) -> bool:
        return treatment(sess.group, level_number, self.always_on_gecko)
