"""HTTP facade exposing rendering, inference, diff, and game operations.

All responses are JSON except the raw SVG/ANSI bodies served by ``/render``.
Failed attempts are domain results, not protocol errors: a type error is a
200 with ``status=type_error``.  Treatment blinding is enforced here — when a
session's current level hides the graphical notation, level and attempt
payloads omit every SVG field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response

from geckograph.game import (
    GameEngine,
    Level,
    NoSkipsRemaining,
    Session,
    SessionComplete,
    SessionNotFound,
    load_levels,
)
from geckograph.infer import (
    ExprSyntaxError,
    TypeError_,
    UnboundName,
    infer,
    parse_expr,
)
from geckograph.layout import LayoutOptions, layout
from geckograph.render import RenderOptions, WidthOverflow, to_ansi, to_svg
from geckograph.syntax import ParseError, Scheme, parse_scheme, print_scheme
from geckograph.typediff import annotate, diff


@dataclass
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    level_path: Optional[str] = None
    log_path: Optional[str] = None
    always_on_gecko: bool = False
    cors_origins: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.level_path is not None and not Path(self.level_path).is_file():
            raise FileNotFoundError(self.level_path)
        if self.log_path is not None:
            parent = Path(self.log_path).parent
            if not parent.is_dir():
                raise FileNotFoundError(str(parent))


def _scheme_svg(scheme: Scheme, mode: str = "full") -> str:
    return to_svg(layout(scheme), RenderOptions(mode=mode))


def _bad_request(kind: str, message: str, offset: Optional[int] = None) -> JSONResponse:
    body: dict = {"kind": kind, "message": message}
    if offset is not None:
        body["offset"] = offset
    return JSONResponse(body, status_code=400)


def _session_payload(engine: GameEngine, sess: Session) -> dict:
    complete = sess.is_complete(len(engine.levels))
    return {
        "session_id": sess.id,
        "group": sess.group,
        "experience": sess.experience,
        "level_index": sess.level_index,
        "skips_remaining": sess.skips_remaining,
        "complete": complete,
        "gecko_shown": (
            engine.gecko_shown(sess, sess.level_index) if not complete else False
        ),
        "per_level": [
            {
                "level": r.level,
                "outcome": r.outcome,
                "elapsed": r.elapsed,
                "attempts": r.attempts,
                "gecko_shown": r.gecko_shown,
            }
            for r in sess.per_level
        ],
    }


def _level_payload(level: Level, show_svg: bool) -> dict:
    target: dict = {"text": level.target_text}
    functions = [{"name": name, "text": text} for name, text in level.available_texts]
    if show_svg:
        target["svg"] = _scheme_svg(level.target)
        for entry, (_, scheme) in zip(functions, level.available):
            entry["svg"] = _scheme_svg(scheme)
    return {
        "number": level.number,
        "title": level.title,
        "target": target,
        "functions": functions,
    }


def create_app(config: Optional[ApiConfig] = None) -> FastAPI:
    config = config or ApiConfig()
    config.validate()
    levels = load_levels(config.level_path)
    engine = GameEngine(
        levels, log_path=config.log_path, always_on_gecko=config.always_on_gecko
    )
    app = FastAPI(title="geckograph", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.state.config = config

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    # -- game ---------------------------------------------------------------

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.json() if await request.body() else {}
        group = body.get("group")
        experience = body.get("experience", "beginner")
        try:
            sess = engine.create_session(group=group, experience=experience)
        except ValueError as e:
            return _bad_request("invalid_session", str(e))
        level = engine.current_level(sess)
        return {
            "session": _session_payload(engine, sess),
            "level": _level_payload(level, engine.gecko_shown(sess, level.number)),
        }

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        try:
            sess = engine.get_session(session_id)
        except SessionNotFound:
            return JSONResponse({"kind": "unknown_session"}, status_code=404)
        return _session_payload(engine, sess)

    @app.get("/levels/{number}")
    async def get_level(number: int, session: Optional[str] = None):
        level = engine.by_number.get(number)
        if level is None:
            return JSONResponse({"kind": "unknown_level"}, status_code=404)
        show_svg = True
        if session is not None:
            try:
                sess = engine.get_session(session)
            except SessionNotFound:
                return JSONResponse({"kind": "unknown_session"}, status_code=404)
            show_svg = engine.gecko_shown(sess, number)
        return _level_payload(level, show_svg)

    @app.post("/sessions/{session_id}/attempts")
    async def post_attempt(session_id: str, request: Request):
        body = await request.json()
        code = body.get("code")
        if not isinstance(code, str):
            return _bad_request("invalid_body", "'code' must be a string")
        try:
            sess = engine.get_session(session_id)
            level = engine.current_level(sess)
            result = engine.attempt(session_id, code)
        except SessionNotFound:
            return JSONResponse({"kind": "unknown_session"}, status_code=404)
        except SessionComplete:
            return JSONResponse({"kind": "session_complete"}, status_code=409)
        payload = result.to_json()
        if result.diff_report is not None and engine.gecko_shown(sess, level.number):
            lroot, rroot = annotate(result.diff_report)
            payload["diff_svgs"] = {"left": to_svg(lroot), "right": to_svg(rroot)}
        payload["session"] = _session_payload(engine, sess)
        return payload

    @app.post("/sessions/{session_id}/skip")
    async def post_skip(session_id: str):
        try:
            sess = engine.skip(session_id)
        except SessionNotFound:
            return JSONResponse({"kind": "unknown_session"}, status_code=404)
        except NoSkipsRemaining:
            return JSONResponse({"kind": "no_skips_remaining"}, status_code=409)
        except SessionComplete:
            return JSONResponse({"kind": "session_complete"}, status_code=409)
        return _session_payload(engine, sess)

    # -- stateless tools ----------------------------------------------------

    @app.post("/infer")
    async def post_infer(request: Request):
        body = await request.json()
        code = body.get("code")
        number = body.get("level")
        if not isinstance(code, str) or not isinstance(number, int):
            return _bad_request("invalid_body", "'code' (string) and 'level' (int) required")
        level = engine.by_number.get(number)
        if level is None:
            return JSONResponse({"kind": "unknown_level"}, status_code=404)
        show_svg = True
        session_id = body.get("session")
        if session_id is not None:
            try:
                sess = engine.get_session(session_id)
            except SessionNotFound:
                return JSONResponse({"kind": "unknown_session"}, status_code=404)
            show_svg = engine.gecko_shown(sess, number)
        try:
            definition = parse_expr(code, level.fixities())
            inferred = infer(definition, level.env())
        except ExprSyntaxError as e:
            return {"error": {"kind": "syntax_error", "message": e.message, "offset": e.offset}}
        except UnboundName as e:
            return {"error": {"kind": "unbound_name", "name": e.name, "path": list(e.path)}}
        except TypeError_ as e:
            return {"error": e.to_json()}
        out: dict = {"inferred": print_scheme(inferred)}
        if show_svg:
            out["svg"] = _scheme_svg(inferred)
        return out

    @app.get("/render")
    async def get_render(
        type: str = Query(...),
        mode: str = "full",
        format: str = "svg",
        width: int = 120,
    ):
        try:
            scheme = parse_scheme(type)
        except ParseError as e:
            return _bad_request("parse_error", e.message, e.offset)
        try:
            options = RenderOptions(mode=mode)
        except ValueError as e:
            return _bad_request("invalid_options", str(e))
        node = layout(scheme)
        if format == "svg":
            return Response(to_svg(node, options), media_type="image/svg+xml")
        if format == "ansi":
            try:
                text = to_ansi(node, options, width=width)
            except WidthOverflow as e:
                return _bad_request(
                    "width_overflow", f"need {e.required} columns, have {e.available}"
                )
            return Response(text, media_type="text/plain; charset=utf-8")
        return _bad_request("invalid_options", f"unknown format {format!r}")

    @app.get("/diff")
    async def get_diff(left: str = Query(...), right: str = Query(...)):
        try:
            lscheme = parse_scheme(left)
        except ParseError as e:
            return _bad_request("parse_error", f"left: {e.message}", e.offset)
        try:
            rscheme = parse_scheme(right)
        except ParseError as e:
            return _bad_request("parse_error", f"right: {e.message}", e.offset)
        report = diff(lscheme, rscheme)
        lroot, rroot = annotate(report)
        out = report.to_json()
        out["svgs"] = {"left": to_svg(lroot), "right": to_svg(rroot)}
        return out

    return app


def run(config: Optional[ApiConfig] = None) -> None:
    import uvicorn

    config = config or ApiConfig()
    uvicorn.run(create_app(config), host=config.host, port=config.port)
