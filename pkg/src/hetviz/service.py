"""HTTP API exposing the full pipeline for the companion UI.

Sessions are in-memory: one per uploaded dataset, holding the raw table,
the coding scheme, a typed-dataset cache (invalidated on scheme change),
the view configuration, and any discovered hyperblocks or saved rules.
Writes to one session are serialized; distinct sessions are independent.

This is a local analyst tool: no auth, not hardened for production.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from . import pipeline, rules as rules_mod
from .core import Dataset, HetvizError, Scale
from .hyperblock import HyperBlock, discover_pure_hbs, hb_from_json, hb_to_json
from .ingest import (
    CodingScheme,
    RawTable,
    SchemeDocument,
    bulk_assign,
    apply_scheme,
    load_scheme,
    parse_csv,
    save_scheme,
)
from .render import RenderSpec, render_svg
from .viewlayout import ViewConfig

MAX_UPLOAD_BYTES = 64 * 1024 * 1024


@dataclass
class Session:
    raw: RawTable
    scheme_doc: SchemeDocument
    view: ViewConfig = field(default_factory=ViewConfig)
    hyperblocks: list[HyperBlock] = field(default_factory=list)
    saved_rules: list[rules_mod.Rule] = field(default_factory=list)
    _typed: Optional[Dataset] = None
    lock: threading.RLock = field(default_factory=threading.RLock)

    def typed(self) -> Dataset:
        with self.lock:
            if self._typed is None:
                self._typed = apply_scheme(self.raw, self.scheme_doc.scheme)
            return self._typed

    def set_scheme(self, doc: SchemeDocument) -> None:
        with self.lock:
            self.scheme_doc = doc
            self._typed = None  # cache invalidation
            self.hyperblocks.clear()


class NotFound(HetvizError):
    pass


def _error_payload(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def create_app() -> FastAPI:
    app = FastAPI(title="hetviz", version="0.1.0")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(dataset_id: str) -> Session:
        with registry_lock:
            s = sessions.get(dataset_id)
        if s is None:
            raise NotFound(f"unknown dataset id {dataset_id!r}")
        return s

    @app.exception_handler(NotFound)
    async def not_found_handler(request: Request, exc: NotFound):
        return JSONResponse(status_code=404, content=_error_payload("not_found", str(exc)))

    @app.exception_handler(HetvizError)
    async def engine_error_handler(request: Request, exc: HetvizError):
        return JSONResponse(status_code=400, content=_error_payload("engine_error", str(exc)))

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(
        request: Request,
        delimiter: str = Query(","),
        missing_token: str = Query("?"),
        has_header: bool = Query(True),
    ):
        body = await request.body()
        if len(body) > MAX_UPLOAD_BYTES:
            return JSONResponse(
                status_code=413,
                content=_error_payload("too_large", f"upload exceeds {MAX_UPLOAD_BYTES} bytes"),
            )
        raw = parse_csv(
            body, delimiter=delimiter, has_header=has_header, missing_token=missing_token
        )
        doc = SchemeDocument(scheme=bulk_assign(raw, Scale.NOMINAL))
        dataset_id = uuid.uuid4().hex[:12]
        with registry_lock:
            sessions[dataset_id] = Session(raw=raw, scheme_doc=doc)
        return {"id": dataset_id, "rows": raw.n_rows, "columns": raw.n_cols}

    @app.get("/api/datasets/{dataset_id}/scheme")
    async def get_scheme(dataset_id: str):
        s = get_session(dataset_id)
        import json

        return json.loads(save_scheme(s.scheme_doc))

    @app.put("/api/datasets/{dataset_id}/scheme")
    async def put_scheme(dataset_id: str, request: Request):
        s = get_session(dataset_id)
        doc = load_scheme(await request.body())
        s.set_scheme(doc)
        return {"ok": True}

    @app.post("/api/datasets/{dataset_id}/encode")
    async def encode(dataset_id: str, payload: dict):
        from . import encoders

        s = get_session(dataset_id)
        attr = payload.get("attr")
        kind = payload.get("encoder")
        params = payload.get("params", {})
        if not attr or not kind:
            return JSONResponse(
                status_code=400,
                content=_error_payload("bad_request", "body needs 'attr' and 'encoder'"),
            )
        ds = s.typed()
        fns = {
            "one_hot": lambda: encoders.one_hot(ds, attr),
            "label": lambda: encoders.label_encode(ds, attr),
            "ordinal": lambda: encoders.ordinal_encode(ds, attr),
            "frequency": lambda: encoders.frequency_encode(ds, attr),
            "mean_target": lambda: encoders.mean_target_encode(ds, attr, **params),
            "prob_ratio": lambda: encoders.probability_ratio_encode(ds, attr, **params),
            "james_stein": lambda: encoders.james_stein_encode(ds, attr, **params),
            "hash": lambda: encoders.hash_encode(ds, attr, **params),
            "wavelength": lambda: encoders.wavelength_color_encode(ds, attr, **params),
        }
        if kind not in fns:
            return JSONResponse(
                status_code=400,
                content=_error_payload("bad_request", f"unknown encoder {kind!r}"),
            )
        result = fns[kind]()
        return {
            "attr": attr,
            "encoder": kind,
            "columns": list(result.columns),
            "code_map": {k: v if not isinstance(v, tuple) else list(v) for k, v in result.code_map.items()},
            "collisions": [sorted(c) for c in result.lossy_collisions],
            "note": result.interpretability_note,
        }

    def _view_config(s: Session, **overrides) -> ViewConfig:
        base = s.view
        kwargs = {
            "reference_attr": base.reference_attr,
            "purity_threshold": base.purity_threshold,
            "min_block_size": base.min_block_size,
            "small_block_threshold": base.small_block_threshold,
            "join_nondominant": base.join_nondominant,
            "sort_mode": base.sort_mode,
            "color_priority": base.color_priority,
            "axis_order": base.axis_order,
            "flips": base.flips,
            "line_width_mode": base.line_width_mode,
            "color_map": base.color_map,
        }
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return ViewConfig(**kwargs)

    @app.get("/api/datasets/{dataset_id}/layout")
    async def layout(
        dataset_id: str,
        ref: Optional[str] = None,
        purity: Optional[float] = None,
        minsize: Optional[float] = None,
        join: Optional[bool] = None,
        sort: Optional[str] = None,
        flips: Optional[str] = None,
    ):
        s = get_session(dataset_id)
        config = _view_config(
            s,
            reference_attr=ref,
            purity_threshold=purity,
            min_block_size=minsize,
            join_nondominant=join,
            sort_mode=sort,
            flips=frozenset(flips.split(",")) if flips else None,
        )
        bundle = pipeline.compute_view(s.typed(), config)
        return pipeline.bundle_to_json(bundle)

    @app.get("/api/datasets/{dataset_id}/report")
    async def report(
        dataset_id: str,
        ref: Optional[str] = None,
        purity: Optional[float] = None,
        minsize: Optional[float] = None,
    ):
        s = get_session(dataset_id)
        config = _view_config(
            s, reference_attr=ref, purity_threshold=purity, min_block_size=minsize
        )
        bundle = pipeline.compute_view(s.typed(), config, with_edges=False)
        return {"report": list(bundle.report)}

    @app.post("/api/datasets/{dataset_id}/hyperblocks/discover")
    async def discover(dataset_id: str):
        s = get_session(dataset_id)
        ds = s.typed()
        with s.lock:
            s.hyperblocks = list(discover_pure_hbs(ds))
            return {"count": len(s.hyperblocks), "hyperblocks": [hb_to_json(h) for h in s.hyperblocks]}

    @app.get("/api/datasets/{dataset_id}/hyperblocks")
    async def list_hyperblocks(dataset_id: str):
        s = get_session(dataset_id)
        with s.lock:
            return {"hyperblocks": [hb_to_json(h) for h in s.hyperblocks]}

    @app.post("/api/datasets/{dataset_id}/rules/eval")
    async def eval_rule_endpoint(dataset_id: str, payload: dict):
        s = get_session(dataset_id)
        rule = rules_mod.rule_from_json(payload)
        ds = s.typed()
        violations = rules_mod.validate_rule(rule, ds)
        if violations:
            return JSONResponse(
                status_code=400,
                content=_error_payload(
                    "type_violation",
                    "; ".join(
                        f"{v.relation.value} forbidden on {v.attr!r}" for v in violations
                    ),
                ),
            )
        metrics, decisions = rules_mod.classify(rule, ds)
        with s.lock:
            s.saved_rules.append(rule)
        return {
            "coverage": metrics.coverage,
            "correct": metrics.correct,
            "precision": metrics.precision,
            "error_rate": metrics.error_rate,
            "decided": sum(1 for d in decisions if d is not None),
        }

    @app.put("/api/datasets/{dataset_id}/view")
    async def put_view(dataset_id: str, payload: dict):
        s = get_session(dataset_id)
        config = _view_config(
            s,
            reference_attr=payload.get("ref"),
            purity_threshold=payload.get("purity"),
            min_block_size=payload.get("min_size"),
            small_block_threshold=payload.get("small_block"),
            join_nondominant=payload.get("join"),
            sort_mode=payload.get("sort"),
            color_priority=tuple(payload["color_priority"]) if "color_priority" in payload else None,
            axis_order=tuple(payload["axis_order"]) if "axis_order" in payload else None,
            flips=frozenset(payload["flips"]) if "flips" in payload else None,
        )
        with s.lock:
            s.view = config
        return {"ok": True}

    @app.get("/api/datasets/{dataset_id}/render.svg")
    async def render_endpoint(
        dataset_id: str,
        mode: str = "lossless_polylines",
        ref: Optional[str] = None,
    ):
        s = get_session(dataset_id)
        config = _view_config(s, reference_attr=ref)
        ds = s.typed()
        bundle = pipeline.compute_view(ds, config)
        # Render the unfiltered bar stacks: use layouts before purity filtering
        # by recomputing with thresholds that keep everything.
        full = pipeline.compute_view(
            ds,
            ViewConfig(
                reference_attr=config.reference_attr,
                purity_threshold=0.0,
                min_block_size=0.0,
                small_block_threshold=config.small_block_threshold,
                join_nondominant=config.join_nondominant,
                sort_mode=config.sort_mode,
                color_priority=config.color_priority,
                axis_order=config.axis_order,
                flips=config.flips,
                color_map=config.color_map,
            ),
        )
        svg = render_svg(
            ds,
            config,
            full.layouts,
            edges=full.edges,
            spec=RenderSpec(mode=mode, frame_threshold=config.purity_threshold),
        )
        return Response(content=svg, media_type="image/svg+xml")

    return app


app = create_app()
