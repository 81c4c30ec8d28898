"""Stateless HTTP service for the disambiguation workbench.

Two endpoints: POST /v1/translate and GET /v1/resources/info. Constraints
live entirely in the request; malformed requests get a 400, per-sentence
failures ride inside the 200 body.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .interpret import Constraints
from .preparse import split_sentences, tokenize
from .resources import ResourceBundle
from .transfer import translate_sentence

MAX_BEAM = 10000
MAX_KBEST = 100


class RequestError(ValueError):
    """Maps to HTTP 400."""


def _parse_beam(value):
    if value is None:
        return "config"
    if value == "inf":
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise RequestError('beam must be an integer or "inf"')
    if not 1 <= value <= MAX_BEAM:
        raise RequestError(f"beam must be in 1..{MAX_BEAM}")
    return value


def _parse_kbest(value):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise RequestError("kbest must be an integer")
    if not 1 <= value <= MAX_KBEST:
        raise RequestError(f"kbest must be in 1..{MAX_KBEST}")
    return value


def handle_translate(body, bundle: ResourceBundle):
    """Run a TranslateRequest; returns (http_status, payload)."""
    try:
        if not isinstance(body, dict):
            raise RequestError("request body must be a JSON object")
        unknown = set(body) - {"text", "beam", "kbest", "constraints"}
        if unknown:
            raise RequestError(f"unknown field {sorted(unknown)[0]!r}")
        text = body.get("text")
        if not isinstance(text, str):
            raise RequestError("text must be a string")
        beam = _parse_beam(body.get("beam"))
        kbest = _parse_kbest(body.get("kbest"))
        try:
            constraints = Constraints.from_json(body.get("constraints"))
        except ValueError as err:
            raise RequestError(str(err)) from None

        sentences = split_sentences(text)
        if not constraints.is_empty():
            # constraints are stated in token indices, so they must fit
            # every sentence they will apply to
            for sentence in sentences:
                try:
                    constraints.validate_for(tokenize(sentence), bundle)
                except ValueError as err:
                    raise RequestError(str(err)) from None
    except RequestError as err:
        return 400, {"error": str(err)}

    results = [
        translate_sentence(sentence, bundle, constraints, beam=beam, kbest=kbest)
        for sentence in sentences
    ]
    return 200, {"sentences": [r.to_json() for r in results]}


def handle_info(bundle: ResourceBundle):
    return {
        "rules": len(bundle.grammar),
        "senses": bundle.sense_count(),
        "sem_nodes": len(bundle.taxonomy.parent),
        "xforms": len(bundle.xforms),
        "fingerprint": bundle.fingerprint,
    }


class EngineRequestHandler(BaseHTTPRequestHandler):
    def _send_json(self, status, payload):
        body = json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        if self.path == "/v1/resources/info":
            self._send_json(200, handle_info(self.server.bundle))
        else:
            self._send_json(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/v1/translate":
            self._send_json(404, {"error": "not found"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send_json(400, {"error": "malformed JSON body"})
            return
        status, payload = handle_translate(body, self.server.bundle)
        self._send_json(status, payload)

    def log_message(self, format, *args):  # quiet by default
        pass


def make_server(bundle: ResourceBundle, host="127.0.0.1", port=0) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), EngineRequestHandler)
    server.bundle = bundle
    return server
