"""Dataset manifest and download cache.

A manifest is a JSON file mapping logical artifact names to where they come from and
where they live in the cache::

    {
      "cache_root": "~/.cache/irrepro",
      "artifacts": {
        "www2-qrels": {"url": "https://...", "sha256": "...", "path": "www2/qrels"},
        "www2-runs":  {"url": "https://...", "path": "www2/runs.tgz", "unpack_to": "www2/runs"}
      }
    }

Logical names are fixed by the code; file names and URLs are not, so a differently laid
out archive only needs a different manifest. ``url`` may be omitted for files placed in
the cache by hand. The cache root is resolved as: explicit argument, then the
``IRREPRO_CACHE`` environment variable, then the manifest, then ``~/.cache/irrepro``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .errors import DigestMismatch, FetchError, ParseError

log = logging.getLogger(__name__)

CACHE_ENV = "IRREPRO_CACHE"
DEFAULT_CACHE = "~/.cache/irrepro"


@dataclass(frozen=True)
class Artifact:
    name: str
    path: str
    url: str | None = None
    sha256: str | None = None
    unpack_to: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    artifacts: dict[str, Artifact]
    cache_root: Path = field(default_factory=lambda: Path(DEFAULT_CACHE).expanduser())

    @classmethod
    def load(cls, path: str | os.PathLike, cache_root: str | os.PathLike | None = None) -> "DatasetManifest":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"manifest {path}: {exc}") from None
        except OSError as exc:
            raise FetchError(f"cannot read manifest {path}: {exc}") from None
        return cls.from_dict(raw, cache_root, base=Path(path).parent)

    @classmethod
    def from_dict(cls, raw: dict, cache_root=None, base: Path | None = None) -> "DatasetManifest":
        artifacts = {}
        for name, spec in raw.get("artifacts", {}).items():
            if "path" not in spec:
                raise ParseError(f"manifest artifact {name!r} has no path")
            artifacts[name] = Artifact(name, spec["path"], spec.get("url"), spec.get("sha256"),
                                       spec.get("unpack_to"))
        root = cache_root or os.environ.get(CACHE_ENV) or raw.get("cache_root") or DEFAULT_CACHE
        root = Path(root).expanduser()
        if not root.is_absolute() and base is not None:
            root = base / root
        return cls(artifacts, root)

    def local_path(self, name: str) -> Path:
        """Path a consumer should read: the unpack directory for archives, else the file."""
        art = self._get(name)
        return self.cache_root / (art.unpack_to or art.path)

    def _get(self, name: str) -> Artifact:
        try:
            return self.artifacts[name]
        except KeyError:
            raise FetchError(f"artifact {name!r} not in manifest") from None


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _quarantine(path: Path) -> Path:
    target = path.with_name(path.name + ".quarantine")
    os.replace(path, target)
    log.warning("quarantined %s -> %s", path, target)
    return target


def _download(url: str, dest: Path, opener: Callable) -> None:
    tmp = dest.with_name(dest.name + ".part")
    try:
        with opener(url, timeout=60) as resp, open(tmp, "wb") as out:
            shutil.copyfileobj(resp, out)
    except (urllib.error.URLError, OSError, ValueError) as exc:
        tmp.unlink(missing_ok=True)
        raise FetchError(f"download of {url} failed: {exc}") from None
    os.replace(tmp, dest)


def fetch_artifact(manifest: DatasetManifest, name: str, opener: Callable = urllib.request.urlopen) -> Path:
    art = manifest._get(name)
    target = manifest.cache_root / art.path
    if target.exists():
        if art.sha256 is None or sha256_of(target) == art.sha256:
            log.info("cache hit: %s", target)
            return _unpacked(manifest, art, target)
        _quarantine(target)
    if art.url is None:
        raise FetchError(f"artifact {name!r} is not cached at {target} and has no URL")
    target.parent.mkdir(parents=True, exist_ok=True)
    log.info("downloading %s", art.url)
    _download(art.url, target, opener)
    if art.sha256 is not None:
        actual = sha256_of(target)
        if actual != art.sha256:
            q = _quarantine(target)
            raise DigestMismatch(f"{name}: expected sha256 {art.sha256}, got {actual} (kept at {q})")
    return _unpacked(manifest, art, target)


def _unpacked(manifest: DatasetManifest, art: Artifact, target: Path) -> Path:
    if art.unpack_to is None:
        return target
    dest = manifest.cache_root / art.unpack_to
    stamp = dest / ".unpacked"
    if not stamp.exists():
        try:
            shutil.unpack_archive(str(target), str(dest))
        except (shutil.ReadError, ValueError) as exc:
            raise FetchError(f"cannot unpack {target}: {exc}") from None
        stamp.write_text(art.sha256 or "", encoding="utf-8")
    return dest


def cmd_fetch(manifest: DatasetManifest, names: Iterable[str] | None = None,
              opener: Callable = urllib.request.urlopen) -> dict[str, Path]:
    """Fetch the named artifacts (all when ``names`` is empty). Idempotent."""
    names = list(names or manifest.artifacts)
    return {name: fetch_artifact(manifest, name, opener) for name in names}
