"""Shared fixtures: a fresh counter registry per test and live servers."""

import socket

import pytest

from patternkit.creational import ConfigBuilder, _reset_registry_for_tests
from patternkit.server import PatternServer


@pytest.fixture(autouse=True)
def fresh_registry():
    _reset_registry_for_tests()
    yield
    _reset_registry_for_tests()


class LineClient:
    """Raw line-oriented TCP client; reads the greeting on connect."""

    def __init__(self, port: int, timeout: float = 5.0):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=timeout)
        self._reader = self.sock.makefile("rb")
        self.greeting = self.read_line()

    def send_line(self, line: str):
        self.sock.sendall(line.encode("utf-8") + b"\n")

    def send_raw(self, data: bytes):
        self.sock.sendall(data)

    def read_line(self) -> str:
        raw = self._reader.readline()
        if not raw:
            raise ConnectionError("server closed the connection")
        return raw.decode("utf-8").rstrip("\n")

    def read_eof(self) -> bytes:
        return self._reader.read()

    def ask(self, line: str) -> str:
        self.send_line(line)
        return self.read_line()

    def close(self):
        # the makefile reader holds a dup of the fd; close it too so the
        # peer actually sees EOF
        try:
            self._reader.close()
        except OSError:
            pass
        try:
            self.sock.close()
        except OSError:
            pass


@pytest.fixture
def make_server():
    servers = []

    def build(**overrides) -> PatternServer:
        builder = ConfigBuilder().port(0)
        builder.workers(overrides.pop("workers", 2))
        for name, value in overrides.items():
            getattr(builder, name)(value)
        srv = PatternServer(builder.build())
        srv.bind()
        srv.start_background()
        servers.append(srv)
        return srv

    yield build
    for srv in servers:
        srv.stop()


@pytest.fixture
def server(make_server) -> PatternServer:
    return make_server()


@pytest.fixture
def connect():
    clients = []

    def build(srv, **kwargs) -> LineClient:
        client = LineClient(srv.port, **kwargs)
        clients.append(client)
        return client

    yield build
    for client in clients:
        client.close()
