"""Wire-level values for the patternd protocol.

Requests are LF-terminated UTF-8 verb lines in every family; the protocol
family only changes how replies are rendered (and parsed back).  Money is
carried as integer minor units and formatted for display here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

ERROR_CODES = frozenset({"EVAL", "EMPTY", "UNKNOWN", "PARSE", "STATE", "LIMIT", "INTERNAL"})
MAX_REQUEST_BYTES = 4096
PROTOCOL_VERSION = 1


class WireError(ValueError):
    """A line that cannot be handled at the protocol layer."""


@dataclass(frozen=True)
class Ok:
    payload: str = ""


@dataclass(frozen=True)
class Err:
    code: str
    message: str

    def __post_init__(self):
        if self.code not in ERROR_CODES:
            raise ValueError("unknown error code %r" % self.code)


@dataclass(frozen=True)
class Evt:
    """An asynchronous push; `line` is the stream line after the EVT tag."""

    line: str


Reply = Ok | Err | Evt


def parse_request(line: str) -> tuple[str, str]:
    """Split a request line into (verb, args).

    The verb must be a single uppercase token; args is the remainder after
    one separating space, verbatim.
    """
    if len(line.encode("utf-8")) > MAX_REQUEST_BYTES:
        raise WireError("request line too long")
    if line == "":
        raise WireError("empty request line")
    verb, _, args = line.partition(" ")
    if not verb.isascii() or not verb.isalpha() or not verb.isupper():
        raise WireError("verb must be a single uppercase token")
    return verb, args


def format_money(minor: int) -> str:
    """Render minor units: one decimal when divisible by ten cents, else two."""
    units, cents = divmod(minor, 100)
    if cents % 10 == 0:
        return "%d.%d" % (units, cents // 10)
    return "%d.%02d" % (units, cents)


def escape_doc(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\n", "\\n")


def unescape_doc(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise WireError("dangling backslash in escaped text")
        nxt = text[i + 1]
        if nxt == "n":
            out.append("\n")
        elif nxt == "\\":
            out.append("\\")
        else:
            raise WireError("bad escape \\%s" % nxt)
        i += 2
    return "".join(out)


class ProtocolFamily:
    """A matched request-parser / reply-renderer pair."""

    name = ""

    def parse_request(self, line: str) -> tuple[str, str]:
        return parse_request(line)

    def render_reply(self, reply: Reply) -> str:
        raise NotImplementedError

    def parse_reply(self, line: str) -> Reply:
        raise NotImplementedError


class TextFamily(ProtocolFamily):
    """Lines `OK <payload>` / `ERR <code> <message>` / `EVT <stream line>`."""

    name = "text"

    def render_reply(self, reply: Reply) -> str:
        if isinstance(reply, Ok):
            return "OK %s" % reply.payload if reply.payload else "OK"
        if isinstance(reply, Err):
            return "ERR %s %s" % (reply.code, reply.message)
        return "EVT %s" % reply.line

    def parse_reply(self, line: str) -> Reply:
        if line == "OK":
            return Ok("")
        if line.startswith("OK "):
            return Ok(line[3:])
        if line.startswith("ERR "):
            code, _, message = line[4:].partition(" ")
            return Err(code, message)
        if line.startswith("EVT "):
            return Evt(line[4:])
        raise WireError("not a text-family reply: %r" % line)


class JsonFamily(ProtocolFamily):
    """One JSON object per line: {ok, value} or {ok, code, message}."""

    name = "json"

    def render_reply(self, reply: Reply) -> str:
        if isinstance(reply, Ok):
            return json.dumps({"ok": True, "value": reply.payload})
        if isinstance(reply, Err):
            return json.dumps({"ok": False, "code": reply.code, "message": reply.message})
        return json.dumps({"evt": reply.line})

    def parse_reply(self, line: str) -> Reply:
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise WireError("not a json-family reply: %r" % line) from exc
        if not isinstance(obj, dict):
            raise WireError("not a json-family reply: %r" % line)
        if "evt" in obj:
            return Evt(obj["evt"])
        if obj.get("ok") is True:
            return Ok(obj.get("value", ""))
        if obj.get("ok") is False:
            return Err(obj["code"], obj.get("message", ""))
        raise WireError("not a json-family reply: %r" % line)
