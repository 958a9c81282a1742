"""Local annotation server: static UI plus a minimal JSON/file API.

Serves the browser annotator (built frontend assets) and the images of one
directory; exported annotations land next to the images as palette PNGs, a
tags sidecar and a manifest fragment that load_manifest consumes directly.

API:
  GET  /api/tasks              -> {"images": [...], "categories": [...]}
  GET  /api/image/<id>         -> image bytes
  GET  /api/annotation/<id>    -> previously exported mask codes + tags
  POST /api/export             -> {"id", "width", "height", "mask" (base64
                                   of raw {0,1,2} codes), "tags",
                                   "elapsed_seconds"}
"""

import base64
import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from ..data.manifest import DatasetManifest, SampleRecord, save_manifest
from ..data.rasters import encode_scribble_mask, load_scribble_mask
from ..errors import ValidationError

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")
_CONTENT_TYPES = {".html": "text/html", ".js": "text/javascript",
                  ".css": "text/css", ".png": "image/png", ".map": "application/json",
                  ".jpg": "image/jpeg", ".jpeg": "image/jpeg", ".svg": "image/svg+xml"}


class AnnotationStore:
    """Image listing + export bookkeeping for one served directory."""

    def __init__(self, image_dir):
        if not os.path.isdir(image_dir):
            raise ValidationError(f"annotation directory not found: {image_dir}")
        self.image_dir = os.path.abspath(image_dir)
        self.scribble_dir = os.path.join(self.image_dir, "scribbles")
        self.lock = threading.Lock()
        self.images = {}
        for name in sorted(os.listdir(self.image_dir)):
            stem, ext = os.path.splitext(name)
            if ext.lower() in IMAGE_EXTENSIONS:
                self.images[stem] = name
        self.categories = []
        cat_path = os.path.join(self.image_dir, "categories.json")
        if os.path.isfile(cat_path):
            with open(cat_path) as fh:
                self.categories = list(json.load(fh))
        self.tags = {}
        self.elapsed = {}
        tags_path = os.path.join(self.image_dir, "tags.json")
        if os.path.isfile(tags_path):
            with open(tags_path) as fh:
                self.tags = json.load(fh)

    def task_list(self):
        return {"images": [{"id": stem, "file": name}
                           for stem, name in self.images.items()],
                "categories": self.categories}

    def image_path(self, image_id):
        if image_id not in self.images:
            raise KeyError(image_id)
        return os.path.join(self.image_dir, self.images[image_id])

    def annotation(self, image_id):
        path = os.path.join(self.scribble_dir, f"{image_id}.png")
        if not os.path.isfile(path):
            return None
        mask = load_scribble_mask(path)
        return {"id": image_id, "width": int(mask.shape[1]),
                "height": int(mask.shape[0]),
                "mask": base64.b64encode(mask.tobytes()).decode(),
                "tags": self.tags.get(image_id, [])}

    def export(self, payload):
        image_id = payload["id"]
        if image_id not in self.images:
            raise ValidationError(f"unknown image id '{image_id}'")
        w = int(payload["width"])
        h = int(payload["height"])
        codes = np.frombuffer(base64.b64decode(payload["mask"]), dtype=np.uint8)
        if codes.size != w * h:
            raise ValidationError("mask payload size does not match width*height")
        mask = codes.reshape(h, w)
        if not mask.any():
            raise ValidationError("refusing to export an empty annotation")
        with self.lock:
            os.makedirs(self.scribble_dir, exist_ok=True)
            out = os.path.join(self.scribble_dir, f"{image_id}.png")
            with open(out, "wb") as fh:
                fh.write(encode_scribble_mask(mask))
            tags = [t for t in payload.get("tags", []) if t in self.categories]
            self.tags[image_id] = tags
            if payload.get("elapsed_seconds") is not None:
                self.elapsed[image_id] = float(payload["elapsed_seconds"])
            with open(os.path.join(self.image_dir, "tags.json"), "w") as fh:
                json.dump(self.tags, fh, indent=2, sort_keys=True)
            self._write_manifest()
        return out

    def _write_manifest(self):
        samples = []
        for stem, name in self.images.items():
            scribble = os.path.join(self.scribble_dir, f"{stem}.png")
            if not os.path.isfile(scribble):
                continue
            tags = tuple(self.categories.index(t) for t in self.tags.get(stem, []))
            samples.append(SampleRecord(
                id=stem, image=os.path.join(self.image_dir, name), split="train",
                scribble=scribble, tags=tags or None))
        if samples:
            manifest = DatasetManifest(root=self.image_dir, samples=samples,
                                       name="annotated", categories=tuple(self.categories))
            save_manifest(os.path.join(self.image_dir, "manifest.json"), manifest)


def make_handler(store, static_dir):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):  # quiet by default
            pass

        def _send(self, code, body, content_type="application/json"):
            self.send_response(code)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, obj, code=200):
            self._send(code, json.dumps(obj).encode())

        def do_GET(self):
            try:
                if self.path == "/api/tasks":
                    return self._send_json(store.task_list())
                if self.path.startswith("/api/image/"):
                    image_id = self.path[len("/api/image/"):]
                    path = store.image_path(image_id)
                    with open(path, "rb") as fh:
                        data = fh.read()
                    ext = os.path.splitext(path)[1].lower()
                    return self._send(200, data, _CONTENT_TYPES.get(ext, "application/octet-stream"))
                if self.path.startswith("/api/annotation/"):
                    ann = store.annotation(self.path[len("/api/annotation/"):])
                    if ann is None:
                        return self._send_json({"error": "no annotation"}, 404)
                    return self._send_json(ann)
                return self._serve_static()
            except KeyError:
                self._send_json({"error": "not found"}, 404)
            except Exception as exc:  # noqa: BLE001
                self._send_json({"error": str(exc)}, 500)

        def do_POST(self):
            try:
                if self.path != "/api/export":
                    return self._send_json({"error": "not found"}, 404)
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode())
                path = store.export(payload)
                return self._send_json({"ok": True, "path": path})
            except ValidationError as exc:
                self._send_json({"error": str(exc)}, 400)
            except Exception as exc:  # noqa: BLE001
                self._send_json({"error": str(exc)}, 500)

        def _serve_static(self):
            if static_dir is None:
                return self._send_json({"error": "no frontend built; use the API"}, 404)
            rel = self.path.lstrip("/") or "index.html"
            rel = os.path.normpath(rel)
            if rel.startswith(".."):
                return self._send_json({"error": "forbidden"}, 403)
            path = os.path.join(static_dir, rel)
            if not os.path.isfile(path):
                return self._send_json({"error": "not found"}, 404)
            with open(path, "rb") as fh:
                data = fh.read()
            ext = os.path.splitext(path)[1].lower()
            self._send(200, data, _CONTENT_TYPES.get(ext, "application/octet-stream"))

    return Handler


def default_static_dir():
    candidate = os.path.join(os.path.dirname(__file__), "..", "..", "..",
                             "frontend", "dist")
    candidate = os.path.abspath(candidate)
    return candidate if os.path.isdir(candidate) else None


def create_server(image_dir, port=8008, static_dir=None):
    store = AnnotationStore(image_dir)
    static = static_dir or default_static_dir()
    handler = make_handler(store, static)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(image_dir, port=8008, static_dir=None):
    server = create_server(image_dir, port=port, static_dir=static_dir)
    print(f"annotating {image_dir} at http://127.0.0.1:{port}/ (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
