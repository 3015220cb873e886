"""Line-oriented REPL client for a patternd server.

The client opens one TCP connection, prints the greeting, then enters a
send/receive loop.  A background reader thread owns stdout for server
traffic so that pushed event lines appear as they arrive, interleaved in
arrival order with ordinary replies.  Event lines are marked with a
leading ``* `` so they stand out from the reply to the command you just
typed.

Run it as ``patternsh``, or pass ``--script`` to feed commands from a
file and exit non-zero on the first error reply.
"""

from __future__ import annotations

import argparse
import queue
import socket
import sys
import threading
from dataclasses import dataclass

_EVENT_TEXT_PREFIX = "EVT "
_EVENT_JSON_PREFIX = '{"evt"'


@dataclass(frozen=True)
class ClientConfig:
    host: str = "127.0.0.1"
    port: int = 7465
    script: str | None = None
    timeout_ms: int = 5000

    def __post_init__(self) -> None:
        if not 0 < self.port < 65536:
            raise ValueError("port out of range")
        if self.timeout_ms < 1:
            raise ValueError("timeout-ms must be >= 1")


def _is_event(line: str) -> bool:
    return line.startswith(_EVENT_TEXT_PREFIX) or line.startswith(_EVENT_JSON_PREFIX)


def _is_error(line: str) -> bool:
    return line.startswith("ERR ") or line.startswith('{"ok": false') or line.startswith('{"ok":false')


class _Reader(threading.Thread):
    """Prints every server line and hands non-event lines to the main loop.

    Keeping all printing on one thread preserves arrival order between
    replies and asynchronous events.  The main loop only consumes the
    queue for flow control, never for output.
    """

    def __init__(self, sock: socket.socket) -> None:
        super().__init__(name="patternsh-reader", daemon=True)
        self._sock = sock
        self.replies: queue.Queue[str | None] = queue.Queue()

    def run(self) -> None:
        buffer = b""
        try:
            while True:
                chunk = self._sock.recv(4096)
                if not chunk:
                    break
                buffer += chunk
                while True:
                    newline = buffer.find(b"\n")
                    if newline < 0:
                        break
                    raw = buffer[:newline]
                    buffer = buffer[newline + 1:]
                    line = raw.decode("utf-8", errors="replace").rstrip("\r")
                    if _is_event(line):
                        print("* " + line, flush=True)
                    else:
                        print(line, flush=True)
                        self.replies.put(line)
        except OSError:
            pass
        self.replies.put(None)


def _read_greeting(sock: socket.socket) -> str:
    buffer = b""
    while b"\n" not in buffer:
        chunk = sock.recv(4096)
        if not chunk:
            raise ConnectionError("server closed the connection before greeting")
        buffer += chunk
    line, _, rest = buffer.partition(b"\n")
    if rest:
        raise ConnectionError("unexpected data after greeting")
    return line.decode("utf-8", errors="replace").rstrip("\r")


def _command_lines(cfg: ClientConfig):
    if cfg.script is not None:
        with open(cfg.script, "r", encoding="utf-8") as handle:
            for line in handle:
                yield line.rstrip("\n").rstrip("\r")
        return
    prompt = "> " if sys.stdin.isatty() else ""
    while True:
        try:
            yield input(prompt)
        except EOFError:
            return


def repl(cfg: ClientConfig) -> int:
    """Run one client session; returns the process exit status."""
    timeout = cfg.timeout_ms / 1000.0
    try:
        sock = socket.create_connection((cfg.host, cfg.port), timeout=timeout)
    except OSError as exc:
        print("connect failed: %s" % exc, file=sys.stderr)
        return 1
    with sock:
        sock.settimeout(timeout)
        try:
            print(_read_greeting(sock), flush=True)
        except (OSError, ConnectionError) as exc:
            print("error: %s" % exc, file=sys.stderr)
            return 1
        reader = _Reader(sock)
        reader.start()
        try:
            for line in _command_lines(cfg):
                command = line
                if not command.strip():
                    continue
                try:
                    sock.sendall((command + "\n").encode("utf-8"))
                except OSError as exc:
                    print("send failed: %s" % exc, file=sys.stderr)
                    return 1
                try:
                    reply = reader.replies.get(timeout=timeout)
                except queue.Empty:
                    print("timed out waiting for reply", file=sys.stderr)
                    return 1
                if reply is None:
                    print("server closed the connection", file=sys.stderr)
                    return 1
                if _is_error(reply) and cfg.script is not None:
                    return 1
                if command.split(" ", 1)[0] == "QUIT":
                    break
        except KeyboardInterrupt:
            pass
        finally:
            try:
                sock.shutdown(socket.SHUT_WR)
            except OSError:
                pass
            reader.join(timeout=timeout)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="patternsh",
        description="interactive client for a patternd server",
    )
    parser.add_argument("--host", default="127.0.0.1", help="server host (default 127.0.0.1)")
    parser.add_argument("--port", type=int, default=7465, help="server port (default 7465)")
    parser.add_argument("--script", default=None, help="read commands from a file instead of stdin")
    parser.add_argument(
        "--timeout-ms",
        type=int,
        default=5000,
        dest="timeout_ms",
        help="per-reply timeout in milliseconds (default 5000)",
    )
    args = parser.parse_args(argv)
    try:
        cfg = ClientConfig(
            host=args.host,
            port=args.port,
            script=args.script,
            timeout_ms=args.timeout_ms,
        )
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    try:
        return repl(cfg)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
