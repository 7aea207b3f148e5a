"""Fetch catalog records from an HTTP endpoint, validate them against a
compiled profile and persist records, reports and one merged graph.

The endpoint returns either a JSON array of records or an envelope
``{"items": [...], "next": "<url>"}``; ``next`` may be relative.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urljoin

import requests
import yaml

from .errors import ProfileError
from .iri import is_absolute_iri
from .ir import SchemaIR, load_ir
from .rdf import TripleSet, merge_triplesets, serialize_ntriples, to_triples
from .report import ValidationReport
from .validate import make_document, validate

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0
DEFAULT_PAGE_CAP = 100
DEFAULT_ATTEMPTS = 3


@dataclass
class HarvestSource:
    name: str
    url: str
    profile: Path
    root_class: str

    def __post_init__(self):
        if not is_absolute_iri(self.url) or not self.url.lower().startswith(("http://", "https://")):
            raise ProfileError("INVALID_SOURCE", f"source url {self.url!r} is not an absolute HTTP(S) URL")
        self.profile = Path(self.profile)

    def load_profile(self) -> SchemaIR:
        ir = load_ir(self.profile)
        if self.root_class not in ir.classes:
            raise ProfileError("UNKNOWN_ROOT_CLASS", f"{self.root_class!r} is not a class of {ir.id}")
        return ir


def load_source(path) -> HarvestSource:
    """Read a source config; a relative ``profile`` path is resolved
    against the config file's directory."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ProfileError("INVALID_SOURCE", f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ProfileError("INVALID_SOURCE", f"{path}: expected a mapping")
    missing = [k for k in ("name", "url", "profile", "root_class") if k not in data]
    if missing:
        raise ProfileError("INVALID_SOURCE", f"{path}: missing {', '.join(missing)}")
    profile = Path(data["profile"])
    if not profile.is_absolute():
        profile = path.parent / profile
    return HarvestSource(str(data["name"]), str(data["url"]), profile, str(data["root_class"]))


@dataclass
class HarvestRun:
    source: str
    started: str
    finished: str | None = None
    fetched: int = 0
    conformant: int = 0
    malformed: int = 0
    pages: int = 0
    reports: list[tuple[str, ValidationReport]] = field(default_factory=list)
    emitted_graph: str | None = None
    triples: int = 0

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "started": self.started,
            "finished": self.finished,
            "pages": self.pages,
            "fetched": self.fetched,
            "conformant": self.conformant,
            "malformed": self.malformed,
            "triples": self.triples,
            "emitted_graph": self.emitted_graph,
            "nonconformant": [
                {"record": rid, "errors": len(rep.errors)} for rid, rep in self.reports if not rep.conformant
            ],
        }


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class _Fetcher:
    def __init__(self, session, timeout: float, attempts: int, backoff: float, sleep):
        self.session = session or requests.Session()
        self.timeout = timeout
        self.attempts = attempts
        self.backoff = backoff
        self.sleep = sleep

    def get_json(self, url: str):
        last = None
        for attempt in range(self.attempts):
            try:
                resp = self.session.get(url, timeout=self.timeout, headers={"Accept": "application/json"})
                if resp.status_code >= 500 or resp.status_code == 429:
                    last = f"HTTP {resp.status_code}"
                elif resp.status_code >= 400:
                    raise ProfileError("NETWORK", f"GET {url}: HTTP {resp.status_code}")
                else:
                    try:
                        return resp.json()
                    except ValueError as exc:
                        raise ProfileError("MALFORMED_PAYLOAD", f"GET {url}: body is not JSON") from exc
            except requests.RequestException as exc:
                last = str(exc)
            if attempt + 1 < self.attempts:
                delay = self.backoff * (2 ** attempt)
                log.warning("GET %s failed (%s); retrying in %.2fs", url, last, delay)
                self.sleep(delay)
        raise ProfileError("NETWORK", f"GET {url} failed after {self.attempts} attempts: {last}")


def _pages(fetcher: _Fetcher, url: str, page_cap: int):
    seen = set()
    count = 0
    while url:
        if count >= page_cap:
            log.warning("page cap %d reached; stopping before %s", page_cap, url)
            return
        if url in seen:
            log.warning("pagination loop at %s; stopping", url)
            return
        seen.add(url)
        payload = fetcher.get_json(url)
        count += 1
        if isinstance(payload, list):
            yield payload
            return
        if not isinstance(payload, dict) or not isinstance(payload.get("items"), list):
            raise ProfileError("MALFORMED_PAYLOAD", f"{url}: expected an array or an {{items, next}} envelope")
        yield payload["items"]
        nxt = payload.get("next")
        url = urljoin(url, nxt) if isinstance(nxt, str) and nxt else None


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_")[:80] or "record"


def _reset_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    for old in path.glob("*.json"):
        old.unlink()


def harvest(
    source: HarvestSource,
    out_dir,
    *,
    ir: SchemaIR | None = None,
    page_cap: int = DEFAULT_PAGE_CAP,
    timeout: float = DEFAULT_TIMEOUT,
    attempts: int = DEFAULT_ATTEMPTS,
    backoff: float = 0.5,
    session=None,
    sleep=time.sleep,
) -> HarvestRun:
    """Harvest one source into ``out_dir``.

    Network failures are retried with exponential backoff and then abort the
    run. A malformed record is reported and counted, and the run goes on.
    """
    ir = ir if ir is not None else source.load_profile()
    out = Path(out_dir)
    records_dir, reports_dir = out / "records", out / "reports"
    _reset_dir(records_dir)
    _reset_dir(reports_dir)
    run = HarvestRun(source=source.name, started=_now())
    fetcher = _Fetcher(session, timeout, attempts, backoff, sleep)
    graphs: list[TripleSet] = []

    for page in _pages(fetcher, source.url, page_cap):
        run.pages += 1
        for record in page:
            index = run.fetched
            run.fetched += 1
            rid = record.get("@id") if isinstance(record, dict) and isinstance(record.get("@id"), str) else None
            rid = rid or f"{source.name}#{index}"
            stem = f"{index:04d}-{_slug(rid)}"
            report = ValidationReport()
            try:
                if not isinstance(record, dict):
                    raise ProfileError("MALFORMED_PAYLOAD", f"record {index} is not a JSON object")
                doc = make_document(record, source.root_class, rid)
            except ProfileError as exc:
                run.malformed += 1
                report.error(exc.code, "/", exc.message)
                doc = None
            if doc is not None:
                report = validate(doc, ir)
                if report.conformant:
                    run.conformant += 1
                    graphs.append(to_triples(doc, ir, blank_prefix=f"r{index}b", check=False))
            (records_dir / f"{stem}.json").write_text(
                json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
            )
            (reports_dir / f"{stem}.json").write_text(
                json.dumps({"record": rid, **report.to_dict()}, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            run.reports.append((rid, report))
            log.info("%s: %s", rid, "conformant" if report.conformant else f"{len(report.errors)} error(s)")

    merged = merge_triplesets(graphs)
    graph_path = out / "graph.nt"
    graph_path.write_bytes(serialize_ntriples(merged).encode("utf-8"))
    run.triples = len(merged)
    run.emitted_graph = str(graph_path)
    run.finished = _now()
    (out / "run.json").write_text(json.dumps(run.to_dict(), indent=2) + "\n", encoding="utf-8")
    return run
