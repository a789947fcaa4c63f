"""Reward scoring service: HTTP endpoints plus a stdio line protocol.

The manifest's answers are loaded into memory once; scoring is lock-free and
stateless, so request order and concurrency can never change a reward.  The
ground truth is never echoed unless the operator passes the debug flag.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .core import TaskKind
from .errors import ManifestUnreadable
from .verifier import score_text


class RewardService:
    def __init__(self, index: dict[str, tuple[TaskKind, str]], echo_gt: bool = False):
        self.index = index
        self.echo_gt = echo_gt
        self._lock = threading.Lock()
        self.counters = {"score": 0, "score_batch": 0, "unknown_sample": 0, "bad_request": 0}

    def _bump(self, key: str) -> None:
        with self._lock:
            self.counters[key] += 1

    def handle_single(self, payload) -> tuple[bool, dict]:
        """(ok, response body); ok=False payloads carry an error object."""
        if not isinstance(payload, dict):
            self._bump("bad_request")
            return False, {"error": {"kind": "bad_request", "detail": "request must be an object"}}
        request_id = payload.get("request_id")
        sid = payload.get("sample_id")
        text = payload.get("response_text")
        if not isinstance(sid, str) or not isinstance(text, str):
            self._bump("bad_request")
            return False, {"request_id": request_id,
                           "error": {"kind": "bad_request",
                                     "detail": "sample_id and response_text must be strings"}}
        entry = self.index.get(sid)
        if entry is None:
            self._bump("unknown_sample")
            return False, {"request_id": request_id,
                           "error": {"kind": "unknown_sample", "sample_id": sid}}
        task, gt = entry
        breakdown = score_text(task, gt, text)
        self._bump("score")
        body = {"request_id": request_id, "sample_id": sid, **breakdown.to_dict()}
        if self.echo_gt:
            body["canonical_gt_echo"] = gt
        return True, body

    def handle_batch(self, payload) -> tuple[bool, dict]:
        if not isinstance(payload, dict) or not isinstance(payload.get("requests"), list):
            self._bump("bad_request")
            return False, {"error": {"kind": "bad_request", "detail": "expected a requests list"}}
        results = [self.handle_single(item)[1] for item in payload["requests"]]
        self._bump("score_batch")
        return True, {"results": results}

    def stats(self) -> dict:
        with self._lock:
            counters = dict(self.counters)
        return {"samples": len(self.index), "counters": counters}


def _make_handler(service: RewardService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _send(self, status: int, body: dict) -> None:
            data = json.dumps(body).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            if self.path == "/healthz":
                self._send(200, {"status": "ok", "samples": len(service.index)})
            elif self.path == "/stats":
                self._send(200, service.stats())
            else:
                self._send(404, {"error": {"kind": "not_found", "path": self.path}})

        def do_POST(self):
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, json.JSONDecodeError):
                self._send(400, {"error": {"kind": "bad_request", "detail": "body is not JSON"}})
                return
            if self.path == "/score":
                ok, body = service.handle_single(payload)
                if ok:
                    self._send(200, body)
                else:
                    kind = body.get("error", {}).get("kind")
                    self._send(404 if kind == "unknown_sample" else 400, body)
            elif self.path == "/score_batch":
                ok, body = service.handle_batch(payload)
                self._send(200 if ok else 400, body)
            else:
                self._send(404, {"error": {"kind": "not_found", "path": self.path}})

        def log_message(self, fmt, *args):
            pass  # scoring traffic is high-volume; stay quiet

    return Handler


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128  # ride out bursts of simultaneous connects


def serve_http(service: RewardService, host: str, port: int) -> None:
    httpd = _Server((host, port), _make_handler(service))
    actual = httpd.server_address
    print(f"listening on {actual[0]}:{actual[1]}", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()


def serve_stdio(service: RewardService) -> None:
    """One JSON request per stdin line, one JSON response per stdout line."""
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError:
            body = {"error": {"kind": "bad_request", "detail": "line is not JSON"}}
        else:
            if isinstance(payload, dict) and "requests" in payload:
                body = service.handle_batch(payload)[1]
            else:
                body = service.handle_single(payload)[1]
        sys.stdout.write(json.dumps(body) + "\n")
        sys.stdout.flush()


def parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep:
        raise ValueError(f"bind must be host:port, got {bind!r}")
    return host, int(port)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="spatial_forge.server",
                                     description="serve rewards for a built manifest")
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--bind", default="127.0.0.1:0", help="host:port (port 0 picks one)")
    parser.add_argument("--stdio", action="store_true", help="speak the line protocol instead of HTTP")
    parser.add_argument("--echo-gt", action="store_true",
                        help="include the canonical ground truth in responses (debug only)")
    args = parser.parse_args(argv)

    from .build import load_reward_index
    try:
        index = load_reward_index(args.manifest)
    except ManifestUnreadable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    service = RewardService(index, echo_gt=args.echo_gt)
    if args.stdio:
        serve_stdio(service)
        return 0
    host, port = parse_bind(args.bind)
    serve_http(service, host, port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
