"""
MCP tool server exposing the alexlab computations over stdio.

Every tool takes presentation text in the ``.fp`` format and answers with the
same JSON documents ``alexlab --machine`` prints. Results are cached per
canonical presentation, since the same group tends to be asked about repeatedly.
"""

import asyncio
import json
import logging
import threading
import time
from collections import OrderedDict, deque
from datetime import datetime, timedelta
from functools import wraps
from typing import Any, Callable

import mcp.server.stdio
import mcp.types as types
from mcp.server import NotificationOptions, Server
from mcp.server.models import InitializationOptions

from . import __version__
from .alexinv import first_order, order_k
from .config import configure_logging
from .errors import AlexlabError, InvalidInputError
from .fpgroup import abelianize, fox_matrix, parse_presentation, serialize_presentation
from .laurent import newton_dim
from .obstruct import connected_sum_report, kahler_test, qp_test
from .serialize import abelianization_document, connected_sum_document, poly_document, report_document

logger = logging.getLogger(__name__)

server = Server("alexlab")

# Compute time tracking
compute_times = deque(maxlen=50)


class ReportCache:
    def __init__(self, ttl_seconds=300, max_entries=256):
        self.ttl_seconds = ttl_seconds
        self.max_entries = max_entries
        self.cache = OrderedDict()
        self.last_updated = {}
        self.hits = 0
        self.misses = 0
        self.lock = threading.Lock()

    def _expired(self, key, now):
        return now - self.last_updated[key] >= timedelta(seconds=self.ttl_seconds)

    def _drop(self, key):
        del self.cache[key]
        del self.last_updated[key]

    def get(self, key):
        with self.lock:
            if key in self.cache:
                if not self._expired(key, datetime.now()):
                    self.hits += 1
                    self.cache.move_to_end(key)
                    logger.debug("cache HIT for %s", key[0])
                    return self.cache[key]
                logger.debug("cache EXPIRED for %s", key[0])
                self._drop(key)
            self.misses += 1
            logger.debug("cache MISS for %s", key[0])
            return None

    def set(self, key, value):
        with self.lock:
            now = datetime.now()
            for old in [k for k in self.cache if self._expired(k, now)]:
                self._drop(old)
            self.cache[key] = value
            self.cache.move_to_end(key)
            self.last_updated[key] = now
            while len(self.cache) > self.max_entries:
                old, _ = self.cache.popitem(last=False)
                del self.last_updated[old]
                logger.debug("cache EVICTED %s", old[0])

    def __len__(self):
        with self.lock:
            return len(self.cache)


report_cache = ReportCache()


def track_compute_time(func: Callable) -> Callable:
    """Decorator recording how long each computation took."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            compute_times.append((time.perf_counter() - start_time) * 1000)

    return wrapper


def get_average_compute_time() -> float:
    if not compute_times:
        return 0
    return round(sum(compute_times) / len(compute_times), 2)


def _presentation(arguments: dict, key: str = "presentation"):
    text = arguments.get(key)
    if not text:
        raise ValueError(f"'{key}' cannot be empty")
    return parse_presentation(text)


def _integer(arguments: dict, key: str) -> int | None:
    value = arguments.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not float(value).is_integer():
        raise InvalidInputError(f"'{key}' must be an integer, got {value!r}")
    return int(value)


def _cached(name: str, canonical: str, extra: tuple, compute: Callable[[], dict]) -> dict:
    key = (name, canonical, extra)
    cached = report_cache.get(key)
    if cached is not None:
        return cached
    doc = track_compute_time(compute)()
    report_cache.set(key, doc)
    return doc


def _compute(name: str, arguments: dict) -> dict[str, Any]:
    if name == "stats":
        return {
            "cached_reports": len(report_cache),
            "cache_hits": report_cache.hits,
            "cache_misses": report_cache.misses,
            "average_compute_ms": get_average_compute_time(),
            "recent_computations": len(compute_times),
        }

    if name == "connected_sum":
        texts = arguments.get("presentations") or []
        ps = [parse_presentation(t) for t in texts]
        canonical = "\n".join(serialize_presentation(p) for p in ps)
        kmax = _integer(arguments, "kmax")
        return _cached(name, canonical, (kmax,), lambda: connected_sum_document(connected_sum_report(ps, kmax)))

    p = _presentation(arguments)
    canonical = serialize_presentation(p)
    if name == "abelianize":
        return _cached(name, canonical, (), lambda: abelianization_document(abelianize(p)))
    if name == "delta":
        k = _integer(arguments, "k")

        def delta():
            F = fox_matrix(p)
            kk, d = first_order(F) if k is None else (k, order_k(F, k))
            return {"k": kk, "delta": poly_document(d)}

        return _cached(name, canonical, (k,), delta)
    if name == "thickness":

        def thickness():
            k0, d = first_order(fox_matrix(p))
            return {"k0": k0, "delta": poly_document(d), "thickness": newton_dim(d)}

        return _cached(name, canonical, (), thickness)
    if name in ("kahler_test", "qp_test"):
        kmax = _integer(arguments, "kmax")
        run_test = kahler_test if name == "kahler_test" else qp_test
        return _cached(name, canonical, (kmax,), lambda: report_document(run_test(p, kmax)))
    raise ValueError(f"Unknown tool: {name}")


_PRESENTATION = {"type": "string", "description": "Presentation in the .fp format (gens ... / rel ... lines)"}
_KMAX = {"type": "integer", "description": "Largest k examined (default ALEXLAB_KMAX)"}


@server.list_tools()
async def handle_list_tools() -> list[types.Tool]:
    """List the available computations."""
    return [
        types.Tool(
            name="abelianize",
            description="First Betti number, torsion and generator images of the abelianization",
            inputSchema={"type": "object", "properties": {"presentation": _PRESENTATION}, "required": ["presentation"]},
        ),
        types.Tool(
            name="delta",
            description="Alexander polynomial Delta^k (default: the first nonvanishing one)",
            inputSchema={
                "type": "object",
                "properties": {"presentation": _PRESENTATION, "k": {"type": "integer", "description": "Index k"}},
                "required": ["presentation"],
            },
        ),
        types.Tool(
            name="thickness",
            description="Dimension of the Newton polytope of the first nonvanishing Alexander polynomial",
            inputSchema={"type": "object", "properties": {"presentation": _PRESENTATION}, "required": ["presentation"]},
        ),
        types.Tool(
            name="kahler_test",
            description="Necessary conditions for a Kähler group",
            inputSchema={
                "type": "object",
                "properties": {"presentation": _PRESENTATION, "kmax": _KMAX},
                "required": ["presentation"],
            },
        ),
        types.Tool(
            name="qp_test",
            description="Necessary conditions for a quasi-projective group",
            inputSchema={
                "type": "object",
                "properties": {"presentation": _PRESENTATION, "kmax": _KMAX},
                "required": ["presentation"],
            },
        ),
        types.Tool(
            name="connected_sum",
            description="Free product of several groups: thickness additivity and the quasi-projective test",
            inputSchema={
                "type": "object",
                "properties": {
                    "presentations": {"type": "array", "items": _PRESENTATION, "minItems": 2},
                    "kmax": _KMAX,
                },
                "required": ["presentations"],
            },
        ),
        types.Tool(
            name="stats",
            description="Cache and timing statistics of this server",
            inputSchema={"type": "object", "properties": {}},
        ),
    ]


@server.call_tool()
async def handle_call_tool(name: str, arguments: dict | None) -> list[types.TextContent]:
    """Handle tool execution requests."""
    arguments = arguments or {}
    try:
        doc = await asyncio.to_thread(_compute, name, arguments)
    except AlexlabError as e:
        logger.error("%s failed: %s", name, e)
        raise ValueError(f"Failed to run {name}: {e}")
    return [types.TextContent(type="text", text=json.dumps(doc, indent=2, ensure_ascii=False))]


async def main():
    """Run the server using stdin/stdout streams."""
    configure_logging()
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            InitializationOptions(
                server_name="alexlab",
                server_version=__version__,
                capabilities=server.get_capabilities(
                    notification_options=NotificationOptions(),
                    experimental_capabilities={},
                ),
            ),
        )


def run():
    asyncio.run(main())


if __name__ == "__main__":
    run()
