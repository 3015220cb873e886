"""Object-construction machinery: the process-wide registry, the fluent
config builder, factory seams for handlers and protocol families, and
deep-cloning prototypes."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .wire import JsonFamily, ProtocolFamily, TextFamily


@dataclass(frozen=True)
class ServerConfig:
    """Fully built server configuration; never observable half-built."""

    port: int = 7465
    workers: int = 4
    queue_cap: int = 64
    family: str = "text"
    max_conns: int = 128
    log_path: str | None = None

    def __post_init__(self):
        if not 0 <= self.port <= 65535:
            raise ValueError("port out of range")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.queue_cap < 1:
            raise ValueError("queue_cap must be >= 1")
        if self.family not in ("text", "json"):
            raise ValueError("family must be 'text' or 'json'")
        if self.max_conns < 1:
            raise ValueError("max_conns must be >= 1")


class ConfigBuilder:
    """Fluent builder for ServerConfig; every setter returns the builder."""

    def __init__(self):
        self._fields: dict = {}

    def port(self, value: int) -> ConfigBuilder:
        self._fields["port"] = value
        return self

    def workers(self, value: int) -> ConfigBuilder:
        self._fields["workers"] = value
        return self

    def queue_cap(self, value: int) -> ConfigBuilder:
        self._fields["queue_cap"] = value
        return self

    def family(self, value: str) -> ConfigBuilder:
        self._fields["family"] = value
        return self

    def max_conns(self, value: int) -> ConfigBuilder:
        self._fields["max_conns"] = value
        return self

    def log_path(self, value: str | None) -> ConfigBuilder:
        self._fields["log_path"] = value
        return self

    def build(self) -> ServerConfig:
        return ServerConfig(**self._fields)


def build_config(builder: ConfigBuilder) -> ServerConfig:
    """Finalize the builder; unset fields take the documented defaults."""
    return builder.build()


class Registry:
    """Process-wide singleton holding config, counters, and the log sink.

    Acquire it through registry_instance(); direct construction elsewhere
    breaks the one-instance guarantee.
    """

    _instance: Registry | None = None
    _lock = threading.Lock()
    _init_runs = 0  # constructor executions, for the race harness

    def __init__(self):
        type(self)._init_runs += 1
        self.config = ServerConfig()
        self.counters: dict[str, int] = {}
        self.log_sink = None  # anything with log_message(text)
        self._counter_lock = threading.Lock()

    def bump(self, name: str, amount: int = 1) -> int:
        if amount < 0:
            raise ValueError("counters are monotone")
        with self._counter_lock:
            self.counters[name] = self.counters.get(name, 0) + amount
            return self.counters[name]

    def snapshot(self) -> dict[str, int]:
        with self._counter_lock:
            return dict(self.counters)


def registry_instance() -> Registry:
    """The one Registry, created lazily under a lock on first acquisition."""
    if Registry._instance is None:
        with Registry._lock:
            if Registry._instance is None:
                Registry._instance = Registry()
    return Registry._instance


def _reset_registry_for_tests():
    """Drop the singleton so a race harness can observe a fresh first call.

    Test-only; production code must never call this.
    """
    with Registry._lock:
        Registry._instance = None
        Registry._init_runs = 0


# Builder demonstration: a director driving a two-part product build.


class Product:
    def __init__(self):
        self.parts: list[str] = []

    def show(self) -> str:
        return "Product parts: " + ", ".join(self.parts)


class TwoPartBuilder:
    """Fluent concrete builder; parts accumulate across runs."""

    def __init__(self):
        self.product = Product()

    def build_part_a(self) -> TwoPartBuilder:
        self.product.parts.append("Part A")
        return self

    def build_part_b(self) -> TwoPartBuilder:
        self.product.parts.append("Part B")
        return self


class Director:
    def __init__(self, builder: TwoPartBuilder):
        self.builder = builder

    def construct(self):
        self.builder.build_part_a().build_part_b()


def demo_build_product(director: Director) -> list[str]:
    """Run the director once and return the product's part list."""
    director.construct()
    return director.builder.product.parts


# Factory method: the dialog fixture and the handler-factory seam.


class Button:
    def render(self) -> str:
        raise NotImplementedError


class WindowsButton(Button):
    def render(self) -> str:
        return "Rendering a Windows button."


class MacButton(Button):
    def render(self) -> str:
        return "Rendering a Mac button."


class Dialog:
    """Creator: subclasses pick the concrete button."""

    def create_button(self) -> Button:
        raise NotImplementedError

    def render_dialog(self) -> str:
        return self.create_button().render()


class WindowsDialog(Dialog):
    def create_button(self) -> Button:
        return WindowsButton()


class MacDialog(Dialog):
    def create_button(self) -> Button:
        return MacButton()


HANDLER_KINDS = ("eval", "doc", "price", "player", "events", "admin")


class HandlerFactory:
    """Factory-method seam: the subclass decides each kind's concrete type."""

    def make(self, kind: str):
        raise NotImplementedError


def create_handler(factory: HandlerFactory, kind: str):
    if kind not in HANDLER_KINDS:
        raise ValueError("unknown handler kind %r; registered kinds: %s"
                         % (kind, ", ".join(HANDLER_KINDS)))
    return factory.make(kind)


# Abstract factory: widget families and the protocol families.


class GuiButton:
    def click(self) -> str:
        raise NotImplementedError


class GuiCheckbox:
    def check(self) -> str:
        raise NotImplementedError


class WindowsGuiButton(GuiButton):
    def click(self) -> str:
        return "Windows Button clicked!"


class MacGuiButton(GuiButton):
    def click(self) -> str:
        return "Mac Button clicked!"


class WindowsGuiCheckbox(GuiCheckbox):
    def check(self) -> str:
        return "Windows Checkbox checked!"


class MacGuiCheckbox(GuiCheckbox):
    def check(self) -> str:
        return "Mac Checkbox checked!"


class GuiFactory:
    def create_button(self) -> GuiButton:
        raise NotImplementedError

    def create_checkbox(self) -> GuiCheckbox:
        raise NotImplementedError


class WindowsGuiFactory(GuiFactory):
    def create_button(self) -> GuiButton:
        return WindowsGuiButton()

    def create_checkbox(self) -> GuiCheckbox:
        return WindowsGuiCheckbox()


class MacGuiFactory(GuiFactory):
    def create_button(self) -> GuiButton:
        return MacGuiButton()

    def create_checkbox(self) -> GuiCheckbox:
        return MacGuiCheckbox()


def create_widget_family(name: str) -> GuiFactory:
    """Widget-family fixture: one factory yields a matched button/checkbox."""
    if name == "windows":
        return WindowsGuiFactory()
    if name == "mac":
        return MacGuiFactory()
    raise ValueError("unknown widget family %r" % name)


def create_protocol_family(name: str) -> ProtocolFamily:
    """Matched parser/renderer pair; mixing families is unrepresentable."""
    if name == "text":
        return TextFamily()
    if name == "json":
        return JsonFamily()
    raise ValueError("unknown protocol family %r" % name)


# Prototypes: explicit field-wise deep clones.


@dataclass
class SessionTemplate:
    greeting: str
    initial_doc: str
    watched_topics: list[str]


def deep_clone(template: SessionTemplate) -> SessionTemplate:
    # field-wise copy on purpose: the independence guarantee stays auditable
    return SessionTemplate(
        greeting=template.greeting,
        initial_doc=template.initial_doc,
        watched_topics=list(template.watched_topics),
    )


class VehiclePrototype:
    """Name/color record with an explicit clone, e.g. "Car (Red)"."""

    def __init__(self, name: str, color: str):
        self.name = name
        self.color = color

    def clone(self) -> VehiclePrototype:
        return VehiclePrototype(self.name, self.color)

    def __str__(self) -> str:
        return "%s (%s)" % (self.name, self.color)
