"""The patternd TCP service.

The reactor thread owns every endpoint; request lines are dispatched
through the verb chain on the worker pool, and finished replies cross back
to the loop as queued commands that enable write interest.  Only a bare
QUIT on an idle session is answered on the loop thread itself.
"""

from __future__ import annotations

import argparse
import itertools
import re
import signal
import socket
import sys
import threading
from collections import deque

from .concurrency import PoolShutdownError, ThreadPool
from .creational import (HandlerFactory, ServerConfig, ConfigBuilder, build_config,
                         create_handler, create_protocol_family, registry_instance)
from .expr import AtomPool, Context, EvalError, I64_MAX, I64_MIN, ParseError, eval_expr, parse_expr
from .messaging import ChatRoom, Handler, Request, Subject, chain_handle, temperature_line
from .policies import STOPPED, apply_discount, parse_strategy, player_press
from .reactor import READ, WRITE, EventHandler, Reactor
from .session_commands import (Caretaker, Document, EmptyHistoryError, UnknownSnapshotError,
                               WriteCommand, execute_command, restore_memento, save_memento,
                               undo_last)
from .structural_kit import (FileLogSink, LazyStatsProxy, NullLogger, RegistryStats,
                             adapt_logger, decorate_handler)
from .wire import (MAX_REQUEST_BYTES, PROTOCOL_VERSION, Err, Evt, Ok, WireError, escape_doc,
                   format_money)

_session_ids = itertools.count(1)

IDENT_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

CHAIN_ORDER = ("admin", "eval", "doc", "price", "player", "events")


class Session:
    """One connection's state; mutated by at most one request at a time."""

    def __init__(self, conn, server: PatternServer):
        self.sid = "user-%d" % next(_session_ids)
        self.conn = conn
        self.server = server
        self.document = Document()
        self.caretaker = Caretaker()
        self.player = STOPPED
        self.ctx = Context()
        self.temp_observer = None
        self.in_buffer = bytearray()
        self.out_buffer = bytearray()
        self.out_lock = threading.Lock()
        self.inbox: deque[str] = deque()
        self.in_flight = False
        self.slot_lock = threading.Lock()
        self.closing = False
        self.open = True


class VerbHandler(Handler):
    verbs: tuple = ()

    def __init__(self, server: PatternServer):
        super().__init__()
        self.server = server

    def accepts(self, request) -> bool:
        return request.verb in self.verbs


def _no_args(request):
    if request.args:
        raise WireError("%s takes no arguments" % request.verb)


def _parse_i64(token: str) -> int:
    body = token[1:] if token[:1] == "-" else token
    if not body or not body.isascii() or not body.isdigit():
        raise WireError("not an integer: %r" % token)
    value = int(token)
    if not I64_MIN <= value <= I64_MAX:
        raise WireError("integer out of range: %r" % token)
    return value


class AdminHandler(VerbHandler):
    verbs = ("STATS", "PING", "QUIT")

    def answer(self, request):
        _no_args(request)
        if request.verb == "PING":
            return Ok("pong")
        if request.verb == "QUIT":
            return Ok("bye")
        counters = self.server.stats_proxy.request()
        payload = " ".join("%s=%d" % kv for kv in sorted(counters.items()))
        return Ok(payload)


class EvalHandler(VerbHandler):
    verbs = ("EVAL", "LET")

    def answer(self, request):
        session = request.session
        if request.verb == "EVAL":
            try:
                tree = parse_expr(request.args, self.server.atom_pool)
                return Ok(str(eval_expr(tree, session.ctx)))
            except (ParseError, EvalError) as exc:
                return Err("EVAL", str(exc))
        tokens = request.args.split()
        if len(tokens) != 2:
            raise WireError("LET takes a name and an integer")
        name, raw = tokens
        if not IDENT_RE.fullmatch(name):
            raise WireError("bad variable name %r" % name)
        session.ctx = session.ctx.bind(name, _parse_i64(raw))
        return Ok()


class DocHandler(VerbHandler):
    verbs = ("WRITE", "SHOW", "UNDO", "SNAPSHOT", "RESTORE")

    def answer(self, request):
        session = request.session
        doc, caretaker = session.document, session.caretaker
        if request.verb == "WRITE":
            new_length = execute_command(doc, caretaker, WriteCommand(request.args))
            return Ok(str(new_length))
        if request.verb == "SHOW":
            _no_args(request)
            return Ok(escape_doc(doc.content))
        if request.verb == "UNDO":
            _no_args(request)
            try:
                return Ok(escape_doc(undo_last(doc, caretaker)))
            except EmptyHistoryError as exc:
                return Err("EMPTY", str(exc))
        if request.verb == "SNAPSHOT":
            _no_args(request)
            return Ok(save_memento(doc, caretaker))
        try:
            return Ok(escape_doc(restore_memento(doc, caretaker, request.args.strip())))
        except UnknownSnapshotError as exc:
            return Err("STATE", str(exc))


class PriceHandler(VerbHandler):
    verbs = ("PRICE",)

    # wire amounts are major units; all arithmetic runs in minor units
    MAX_MAJOR = I64_MAX // 100

    def answer(self, request):
        tokens = request.args.split()
        if len(tokens) != 2:
            raise WireError("PRICE takes an amount and a strategy")
        amount = _parse_i64(tokens[0])
        if not 0 <= amount <= self.MAX_MAJOR:
            raise WireError("price out of range")
        try:
            strategy = parse_strategy(tokens[1])
        except ValueError as exc:
            raise WireError(str(exc)) from None
        return Ok(format_money(apply_discount(strategy, amount * 100)))


class PlayerHandler(VerbHandler):
    verbs = ("PLAY", "PAUSE", "STOP")

    def answer(self, request):
        _no_args(request)
        session = request.session
        message, session.player = player_press(session.player, request.verb.lower())
        return Ok(message)


class SessionTempObserver:
    def __init__(self, session: Session):
        self.session = session

    def update(self, value: int):
        line = "temp " + temperature_line(self.session.sid, value)
        self.session.server.push_event(self.session, Evt(line))


class EventsHandler(VerbHandler):
    verbs = ("WATCH", "UNWATCH", "TEMP", "SAY")

    def answer(self, request):
        session = request.session
        server = self.server
        if request.verb == "WATCH":
            if request.args != "temp":
                raise WireError("unknown topic %r" % request.args)
            if session.temp_observer is not None:
                return Err("STATE", "already watching temp")
            observer = SessionTempObserver(session)
            server.temperature.subscribe(observer)
            session.temp_observer = observer
            return Ok()
        if request.verb == "UNWATCH":
            if request.args != "temp":
                raise WireError("unknown topic %r" % request.args)
            if session.temp_observer is None:
                return Err("STATE", "not watching temp")
            server.temperature.unsubscribe(session.temp_observer)
            session.temp_observer = None
            return Ok()
        if request.verb == "TEMP":
            token = request.args.strip()
            if not token:
                raise WireError("TEMP takes an integer")
            server.temperature.publish(_parse_i64(token))
            return Ok()
        server.chat.send(session.sid, request.args)
        return Ok()


class FallbackHandler(Handler):
    """Chain tail: answers everything left over with UNKNOWN."""

    def accepts(self, request) -> bool:
        return True

    def answer(self, request):
        return Err("UNKNOWN", "no handler for %s" % request.verb)


class ServerHandlerFactory(HandlerFactory):
    KINDS = {
        "admin": AdminHandler,
        "eval": EvalHandler,
        "doc": DocHandler,
        "price": PriceHandler,
        "player": PlayerHandler,
        "events": EventsHandler,
    }

    def __init__(self, server: PatternServer):
        self.server = server

    def make(self, kind: str):
        return self.KINDS[kind](self.server)


def build_chain(server: PatternServer, middleware=("logging", "timing"), logger=None):
    """Assemble the verb chain in its fixed order and wrap it in middleware."""
    factory = ServerHandlerFactory(server)
    nodes = [create_handler(factory, kind) for kind in CHAIN_ORDER]
    nodes.append(FallbackHandler())
    for node, successor in zip(nodes, nodes[1:]):
        node.set_successor(successor)
    return decorate_handler(nodes[0], middleware, logger)


def handle_line(session: Session, line: str):
    """Dispatch one LF-stripped request line to a Reply."""
    server = session.server
    try:
        verb, args = server.family.parse_request(line)
        request = Request(verb, args, session)
    except (WireError, ValueError) as exc:
        return Err("PARSE", str(exc))
    registry_instance().bump("requests")
    try:
        reply = chain_handle(server.chain, request)
    except WireError as exc:
        return Err("PARSE", str(exc))
    except Exception as exc:
        return Err("INTERNAL", "unexpected failure: %s" % exc)
    if reply is None:
        return Err("UNKNOWN", "no handler for %s" % verb)
    return reply


class ListenerHandler(EventHandler):
    def __init__(self, server: PatternServer):
        self.server = server

    def on_readable(self, listener):
        try:
            conn, _ = listener.accept()
        except OSError:
            return
        conn.setblocking(False)
        self.server._on_accept(conn)


class ConnectionHandler(EventHandler):
    def __init__(self, server: PatternServer):
        self.server = server

    def on_readable(self, conn):
        session = self.server.sessions.get(conn)
        if session is None:
            return
        try:
            data = conn.recv(4096)
        except BlockingIOError:
            return
        except OSError:
            self.server._drop(session)
            return
        if not data:
            self.server._drop(session)
            return
        session.in_buffer += data
        self.server._pump_lines(session)

    def on_writable(self, conn):
        session = self.server.sessions.get(conn)
        if session is None:
            return
        finished = False
        with session.out_lock:
            if session.out_buffer:
                try:
                    sent = conn.send(session.out_buffer)
                    del session.out_buffer[:sent]
                except BlockingIOError:
                    pass
                except OSError:
                    finished = True
            if not session.out_buffer:
                finished = finished or session.closing
                if not finished:
                    self.server.reactor.modify(conn, READ)
        if finished:
            self.server._drop(session)


class PatternServer:
    """Composition root wiring the pool, reactor, chain, and event fan-out."""

    def __init__(self, config: ServerConfig):
        self.config = config
        registry = registry_instance()
        registry.config = config
        self.family = create_protocol_family(config.family)
        self.pool = ThreadPool(config.workers, config.queue_cap)
        self.reactor = Reactor()
        if config.log_path:
            self.logger = adapt_logger(FileLogSink(config.log_path))
        else:
            self.logger = NullLogger()
        registry.log_sink = self.logger
        self.temperature = Subject(logger=self.logger)
        self.chat = ChatRoom()
        self.atom_pool = AtomPool()
        self.stats_proxy = LazyStatsProxy(RegistryStats)
        self.chain = build_chain(self, logger=self.logger)
        self.sessions: dict = {}
        self.listener = None
        self.port = None
        self._listener_handler = ListenerHandler(self)
        self._conn_handler = ConnectionHandler(self)
        self._loop_thread = None

    # -- lifecycle ----------------------------------------------------------

    def bind(self):
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind(("127.0.0.1", self.config.port))
        except OSError:
            sock.close()
            raise
        sock.listen(128)
        sock.setblocking(False)
        self.listener = sock
        self.port = sock.getsockname()[1]
        self.reactor.register(sock, READ, self._listener_handler)

    def run(self, max_wait: float = 0.5):
        try:
            self.reactor.run(max_wait)
        finally:
            self.pool.shutdown("drain")

    def start_background(self, max_wait: float = 0.05):
        if self.listener is None:
            self.bind()
        self._loop_thread = threading.Thread(target=self.run, args=(max_wait,), daemon=True)
        self._loop_thread.start()

    def stop(self):
        self.reactor.stop()
        if self._loop_thread is not None:
            self._loop_thread.join(timeout=10)

    def active_sessions(self) -> int:
        return len(self.sessions)

    # -- connection plumbing (loop thread) ----------------------------------

    def _on_accept(self, conn):
        if len(self.sessions) >= self.config.max_conns:
            line = self.family.render_reply(Err("LIMIT", "too many connections")) + "\n"
            try:
                conn.send(line.encode("utf-8"))
            except OSError:
                pass
            conn.close()
            return
        session = Session(conn, self)
        self.sessions[conn] = session
        self.reactor.register(conn, READ, self._conn_handler)
        self.chat.join(session.sid, _ChatDelivery(self, session))
        self._queue_reply(session, Ok("patternd %d %s" % (PROTOCOL_VERSION, session.sid)))

    def _drop(self, session: Session):
        if self.sessions.pop(session.conn, None) is None:
            return
        with session.out_lock:
            session.open = False
        self.chat.leave(session.sid)
        if session.temp_observer is not None:
            try:
                self.temperature.unsubscribe(session.temp_observer)
            except ValueError:
                pass
            session.temp_observer = None
        self.reactor.deregister(session.conn)
        try:
            session.conn.close()
        except OSError:
            pass

    def _pump_lines(self, session: Session):
        while True:
            index = session.in_buffer.find(b"\n")
            if index < 0:
                if len(session.in_buffer) > MAX_REQUEST_BYTES:
                    self._queue_reply(session, Err("LIMIT", "request line too long"),
                                      close=True)
                return
            raw = bytes(session.in_buffer[:index])
            del session.in_buffer[:index + 1]
            if raw.endswith(b"\r"):
                raw = raw[:-1]
            if len(raw) > MAX_REQUEST_BYTES:
                self._queue_reply(session, Err("LIMIT", "request line too long"), close=True)
                return
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                self._queue_reply(session, Err("PARSE", "request is not valid UTF-8"))
                continue
            self._enqueue_request(session, line)

    def _enqueue_request(self, session: Session, line: str):
        with session.slot_lock:
            idle = not session.in_flight and not session.inbox
            if idle and line == "QUIT":
                pass  # answered inline below, off the pool
            else:
                session.inbox.append(line)
                if session.in_flight:
                    return
                session.in_flight = True
                idle = False
        if idle:
            self._queue_reply(session, Ok("bye"), close=True)
            return
        try:
            self.pool.submit(self._run_session_requests, session)
        except PoolShutdownError:
            with session.slot_lock:
                session.in_flight = False

    # -- request execution (worker threads) ---------------------------------

    def _run_session_requests(self, session: Session):
        while True:
            with session.slot_lock:
                if not session.inbox:
                    session.in_flight = False
                    return
                line = session.inbox.popleft()
            reply = handle_line(session, line)
            close = line.partition(" ")[0] == "QUIT" and isinstance(reply, Ok)
            self._queue_reply(session, reply, close=close)

    # -- reply / event completion (any thread) -------------------------------

    def _queue_reply(self, session: Session, reply, close: bool = False):
        data = (self.family.render_reply(reply) + "\n").encode("utf-8")
        with session.out_lock:
            if not session.open:
                return
            session.out_buffer += data
            if close:
                session.closing = True
        self.reactor.modify(session.conn, READ | WRITE)

    def push_event(self, session: Session, evt: Evt):
        self._queue_reply(session, evt)


class _ChatDelivery:
    """Member callback handed to the chat room for one session."""

    def __init__(self, server: PatternServer, session: Session):
        self.server = server
        self.session = session

    def __call__(self, line: str):
        self.server.push_event(self.session, Evt("chat " + line))


def serve(config: ServerConfig) -> int:
    """Run patternd until interrupted; returns a process exit status."""
    server = PatternServer(config)
    try:
        server.bind()
    except OSError as exc:
        print("patternd: cannot bind port %d: %s" % (config.port, exc), file=sys.stderr)
        return 1
    print("patternd listening on 127.0.0.1:%d" % server.port, file=sys.stderr)
    signal.signal(signal.SIGINT, lambda *_: server.reactor.stop())
    signal.signal(signal.SIGTERM, lambda *_: server.reactor.stop())
    server.run()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="patternd",
                                     description="pattern demonstration TCP service")
    parser.add_argument("--port", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--queue-cap", type=int, default=None)
    parser.add_argument("--family", choices=("text", "json"), default=None)
    parser.add_argument("--max-conns", type=int, default=None)
    parser.add_argument("--log", default=None, metavar="PATH")
    args = parser.parse_args(argv)

    builder = ConfigBuilder()
    if args.port is not None:
        builder.port(args.port)
    if args.workers is not None:
        builder.workers(args.workers)
    if args.queue_cap is not None:
        builder.queue_cap(args.queue_cap)
    if args.family is not None:
        builder.family(args.family)
    if args.max_conns is not None:
        builder.max_conns(args.max_conns)
    if args.log is not None:
        builder.log_path(args.log)
    try:
        config = build_config(builder)
    except ValueError as exc:
        print("patternd: %s" % exc, file=sys.stderr)
        return 2
    return serve(config)


if __name__ == "__main__":
    sys.exit(main())
