"""Stage-graph orchestrator: runs injection, disfluency reinsertion, and
adapter-backed stages over a manifest with per-record caching and
provenance stamping.

Every per-record stage result is cached under a content-addressed key
(stage name, effective stage config, adapter identity, input field
values); reruns of an unchanged plan recompute nothing and reproduce the
same output bytes. Per-record failures never abort a run; the run report
is the completeness contract.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import disfluency as disfl
from . import metrics as qm
from . import reports
from .adapters import AdapterSpec, invoke_adapter, read_vector_file
from .edits import extract_edits
from .inject import InjectionConfig, inject_errors, utterance_seed
from .lexicons import load_lexicons
from .manifest import (
    Manifest,
    ManifestError,
    UtteranceRecord,
    manifest_bytes,
    read_manifest,
    write_manifest,
)

TOOL_VERSION = "0.1.0"

STAGE_NAMES = (
    "inject",
    "inject-adapter",
    "disfluency",
    "tts",
    "asr",
    "speaker-embed",
    "grade-text",
    "grade-audio",
    "metrics",
    "filter",
    "assemble",
)


class PipelineError(RuntimeError):
    pass


class StagePreconditionError(PipelineError):
    pass


@dataclass
class StageSpec:
    name: str
    config: dict = field(default_factory=dict)


@dataclass
class StagePlan:
    stages: list[StageSpec]
    seed: int = 0
    cache_dir: Optional[Path] = None
    timestamp: str = ""
    jobs: int = 1

    @classmethod
    def from_json_obj(cls, obj: dict) -> "StagePlan":
        stages = [
            StageSpec(name=s["name"], config=dict(s.get("config", {})))
            for s in obj["stages"]
        ]
        return cls(
            stages=stages,
            seed=int(obj.get("seed", 0)),
            cache_dir=Path(obj["cache_dir"]) if obj.get("cache_dir") else None,
            timestamp=str(obj.get("timestamp", "")),
            jobs=int(obj.get("jobs", 1)),
        )


@dataclass
class StageReport:
    name: str
    processed: int = 0
    cached: int = 0
    failed: dict[str, str] = field(default_factory=dict)
    flagged: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "processed": self.processed,
            "cached": self.cached,
            "failed": dict(sorted(self.failed.items())),
            "flagged": sorted(self.flagged),
            "extra": self.extra,
        }


@dataclass
class RunReport:
    stages: list[StageReport] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {"stages": [s.to_json_obj() for s in self.stages]}

    def render_text(self) -> str:
        lines = ["stage            processed  cached  failed"]
        for s in self.stages:
            lines.append(
                f"{s.name:<16} {s.processed:>9}  {s.cached:>6}  {len(s.failed):>6}"
            )
        return "\n".join(lines) + "\n"


class RunContext:
    def __init__(self, manifest, plan, out_dir, lex=None):
        self.manifest = manifest
        self.plan = plan
        self.out_dir = Path(out_dir)
        self.lex = lex or load_lexicons()
        self.sidecars: dict[str, dict] = {}
        self.report = RunReport()

    def stamp(self, stage_name: str) -> dict:
        return {
            "stage": stage_name,
            "tool_version": TOOL_VERSION,
            "seed": self.plan.seed,
            "timestamp": self.plan.timestamp,
        }


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


# --- per-record stage machinery ----------------------------------------------

class RecordStage:
    """A stage that fills record fields and/or sidecar values per record."""

    name = ""
    requires: tuple[str, ...] = ()
    produces_fields: tuple[str, ...] = ()
    produces_sidecars: tuple[str, ...] = ()
    requires_sidecars: tuple[str, ...] = ()

    def __init__(self, config: dict):
        self.config = dict(config)

    def effective_config(self, ctx: RunContext) -> dict:
        return self.config

    def adapter_identity(self) -> str:
        return ""

    def cache_inputs(self, record: UtteranceRecord) -> dict:
        return {name: getattr(record, name) for name in self.requires}

    def compute(self, pending: list[UtteranceRecord], ctx: RunContext):
        """Return {record_id: {'fields':..., 'sidecars':..., 'flags':...}}
        plus a {record_id: reason} failure map."""
        raise NotImplementedError

    # -- shared runner --

    def _cache_key(self, record: UtteranceRecord, ctx: RunContext) -> str:
        payload = _canonical(
            [
                self.name,
                self.effective_config(ctx),
                self.adapter_identity(),
                self.cache_inputs(record),
            ]
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _cache_path(self, key: str, ctx: RunContext) -> Optional[Path]:
        if ctx.plan.cache_dir is None:
            return None
        return ctx.plan.cache_dir / self.name / key[:2] / f"{key}.json"

    def run(self, ctx: RunContext) -> StageReport:
        report = StageReport(name=self.name)
        for record in ctx.manifest.records:
            for name in self.requires:
                if getattr(record, name) is None:
                    raise StagePreconditionError(
                        f"stage {self.name!r} requires field {name!r}; "
                        f"record {record.id!r} lacks it"
                    )

        pending: list[UtteranceRecord] = []
        cached_outputs: dict[str, dict] = {}
        keys: dict[str, str] = {}
        for record in ctx.manifest.records:
            key = self._cache_key(record, ctx)
            keys[record.id] = key
            path = self._cache_path(key, ctx)
            if path is not None and path.exists():
                cached_outputs[record.id] = json.loads(path.read_text("utf-8"))
            else:
                pending.append(record)

        outputs, failures = self.compute(pending, ctx)
        report.failed.update(failures)

        for record in ctx.manifest.records:
            if record.id in cached_outputs:
                entry = cached_outputs[record.id]
                report.cached += 1
            elif record.id in outputs:
                output = outputs[record.id]
                entry = {
                    "fields": output.get("fields", {}),
                    "sidecars": output.get("sidecars", {}),
                    "flags": output.get("flags", []),
                    "provenance": ctx.stamp(self.name),
                }
                path = self._cache_path(keys[record.id], ctx)
                if path is not None:
                    path.parent.mkdir(parents=True, exist_ok=True)
                    _atomic_write(path, _canonical(entry))
                report.processed += 1
            else:
                continue  # failed record: leave untouched
            for name, value in entry["fields"].items():
                setattr(record, name, value)
            for sidecar, value in entry["sidecars"].items():
                ctx.sidecars.setdefault(sidecar, {})[record.id] = value
            if entry.get("flags"):
                report.flagged.append(record.id)
            if entry["fields"] or entry["sidecars"]:
                record.provenance.append(dict(entry["provenance"]))
        return report


class InjectStage(RecordStage):
    name = "inject"
    requires = ("text_gec",)
    produces_fields = ("text_generated",)

    def _injection_config(self, ctx: RunContext) -> InjectionConfig:
        obj = dict(self.config)
        obj.setdefault("seed", ctx.plan.seed)
        return InjectionConfig.from_json_obj(obj)

    def effective_config(self, ctx: RunContext) -> dict:
        return self._injection_config(ctx).to_json_obj()

    def compute(self, pending, ctx):
        config = self._injection_config(ctx)

        def one(record):
            result = inject_errors(
                record.text_gec,
                config,
                utterance_seed(config.seed, record.id),
                ctx.lex,
            )
            return record.id, {"fields": {"text_generated": result.text}, "sidecars": {}}

        if ctx.plan.jobs > 1 and pending:
            with ThreadPoolExecutor(max_workers=ctx.plan.jobs) as pool:
                results = list(pool.map(one, pending))
        else:
            results = [one(r) for r in pending]
        return dict(results), {}


class DisfluencyStage(RecordStage):
    name = "disfluency"
    requires = ("text_original", "text_generated")
    produces_fields = ("text_generated_disfluent",)

    def cache_inputs(self, record):
        inputs = super().cache_inputs(record)
        inputs["disfluencies"] = [
            s.to_json() for s in (record.disfluencies or [])
        ]
        return inputs

    def compute(self, pending, ctx):
        def one(record):
            spans = record.disfluencies or []
            fluent, anchors = disfl.strip_disfluencies(record.text_original, spans)
            out = disfl.reinsert_disfluencies(fluent, anchors, record.text_generated)
            flags = disfl.repetition_mismatches(anchors, record.text_generated, out)
            return record.id, {
                "fields": {"text_generated_disfluent": out},
                "sidecars": {},
                "flags": [f"repetition-anchor-{i}" for i in flags],
            }

        if ctx.plan.jobs > 1 and pending:
            with ThreadPoolExecutor(max_workers=ctx.plan.jobs) as pool:
                results = list(pool.map(one, pending))
        else:
            results = [one(r) for r in pending]
        return dict(results), {}


class AdapterRecordStage(RecordStage):
    """Shared machinery for stages backed by one external adapter."""

    task = ""

    def adapter_spec(self) -> AdapterSpec:
        try:
            return AdapterSpec.from_json_obj(self.config["adapter"], task=self.task)
        except KeyError:
            raise PipelineError(f"stage {self.name!r} needs an 'adapter' config")

    def adapter_identity(self) -> str:
        return self.adapter_spec().identity()

    def build_request(self, record: UtteranceRecord, ctx: RunContext) -> dict:
        raise NotImplementedError

    def handle_response(self, record, response: dict, ctx: RunContext) -> dict:
        raise NotImplementedError

    def compute(self, pending, ctx):
        if not pending:
            return {}, {}
        requests = [self.build_request(r, ctx) for r in pending]
        result = invoke_adapter(self.adapter_spec(), requests)
        outputs = {}
        failures = dict(result.errors)
        for rid in result.missing:
            failures.setdefault(rid, "missing-response")
        for record in pending:
            if record.id in failures:
                continue
            response = result.responses.get(record.id)
            if response is None:
                failures[record.id] = "missing-response"
                continue
            try:
                outputs[record.id] = self.handle_response(record, response, ctx)
            except (KeyError, ValueError) as exc:
                failures[record.id] = f"bad response: {exc}"
        return outputs, failures


class InjectAdapterStage(AdapterRecordStage):
    name = "inject-adapter"
    task = "reverse_gec"
    requires = ("text_gec",)
    produces_fields = ("text_generated",)

    def build_request(self, record, ctx):
        return {"id": record.id, "task": self.task, "text": list(record.text_gec)}

    def handle_response(self, record, response, ctx):
        return {"fields": {"text_generated": list(response["text"])}, "sidecars": {}}


class TtsStage(AdapterRecordStage):
    name = "tts"
    task = "tts"
    requires = ("text_generated_disfluent", "audio_original")
    produces_fields = ("audio_generated",)

    def exchange_dir(self, ctx: RunContext) -> Path:
        configured = self.config.get("exchange_dir")
        path = Path(configured) if configured else ctx.out_dir / "audio_generated"
        path.mkdir(parents=True, exist_ok=True)
        return path

    def build_request(self, record, ctx):
        return {
            "id": record.id,
            "task": self.task,
            "text": list(record.text_generated_disfluent),
            "reference_audio": record.audio_original,
            "exchange_dir": str(self.exchange_dir(ctx)),
        }

    def handle_response(self, record, response, ctx):
        return {"fields": {"audio_generated": str(response["audio"])}, "sidecars": {}}


class AsrStage(AdapterRecordStage):
    name = "asr"
    task = "asr"
    requires = ("audio_generated",)
    produces_sidecars = ("asr",)

    def build_request(self, record, ctx):
        return {"id": record.id, "task": self.task, "audio": record.audio_generated}

    def handle_response(self, record, response, ctx):
        return {"fields": {}, "sidecars": {"asr": list(response["text"])}}


def _response_vector(response: dict) -> list[float]:
    if "vector" in response:
        return [float(v) for v in response["vector"]]
    _, vector = read_vector_file(response["vector_file"])
    return vector


class SpeakerEmbedStage(AdapterRecordStage):
    name = "speaker-embed"
    task = "embed"
    requires = ("audio_original", "audio_generated")
    produces_sidecars = ("distances",)

    def compute(self, pending, ctx):
        if not pending:
            return {}, {}
        requests = []
        for record in pending:
            requests.append(
                {"id": f"{record.id}#orig", "task": self.task, "audio": record.audio_original}
            )
            requests.append(
                {"id": f"{record.id}#gen", "task": self.task, "audio": record.audio_generated}
            )
        result = invoke_adapter(self.adapter_spec(), requests)
        outputs = {}
        failures = {}
        for record in pending:
            problems = [
                result.errors.get(f"{record.id}#{side}")
                or ("missing-response" if f"{record.id}#{side}" in result.missing else None)
                for side in ("orig", "gen")
            ]
            problem = next((p for p in problems if p), None)
            if problem:
                failures[record.id] = problem
                continue
            try:
                a = _response_vector(result.responses[f"{record.id}#orig"])
                b = _response_vector(result.responses[f"{record.id}#gen"])
                distance = qm.cosine_distance(a, b)
            except (KeyError, ValueError, qm.MetricError) as exc:
                failures[record.id] = f"bad response: {exc}"
                continue
            outputs[record.id] = {"fields": {}, "sidecars": {"distances": distance}}
        return outputs, failures


class GradeTextStage(AdapterRecordStage):
    name = "grade-text"
    task = "grade_text"
    produces_sidecars = ("scores_text",)

    @property
    def requires(self):
        return (self.config.get("field", "text_generated_disfluent"),)

    def build_request(self, record, ctx):
        text_field = self.config.get("field", "text_generated_disfluent")
        return {
            "id": record.id,
            "task": self.task,
            "text": list(getattr(record, text_field)),
            "part": record.part,
        }

    def handle_response(self, record, response, ctx):
        return {"fields": {}, "sidecars": {"scores_text": float(response["score"])}}


class GradeAudioStage(AdapterRecordStage):
    name = "grade-audio"
    task = "grade_audio"
    requires = ("audio_generated",)
    produces_sidecars = ("scores_audio",)

    def build_request(self, record, ctx):
        return {
            "id": record.id,
            "task": self.task,
            "audio": record.audio_generated,
            "part": record.part,
        }

    def handle_response(self, record, response, ctx):
        return {"fields": {}, "sidecars": {"scores_audio": float(response["score"])}}


# --- aggregate stages ---------------------------------------------------------

class MetricsStage:
    """Renders metric reports (delimited data plus figures) from whatever
    sidecars earlier stages produced."""

    name = "metrics"
    requires: tuple[str, ...] = ()
    produces_fields: tuple[str, ...] = ()
    produces_sidecars: tuple[str, ...] = ()
    requires_sidecars: tuple[str, ...] = ()

    def __init__(self, config: dict):
        self.config = dict(config)

    def run(self, ctx: RunContext) -> StageReport:
        report = StageReport(name=self.name)
        figures = bool(self.config.get("figures", True))
        out = ctx.out_dir

        asr = ctx.sidecars.get("asr", {})
        if asr:
            breakdowns = []
            for record in ctx.manifest.records:
                if record.id not in asr:
                    continue
                reference = record.text_generated_disfluent or record.text_original
                if reference is None:
                    continue
                breakdowns.append(qm.wer(reference, asr[record.id]))
            if breakdowns:
                pooled = qm.aggregate_wer(breakdowns)
                _atomic_write(
                    out / "wer_report.txt",
                    reports.render_wer_table([("Generated", pooled)]),
                )
                report.extra["wer"] = round(pooled.wer, 6)
                report.processed += len(breakdowns)

        distances = ctx.sidecars.get("distances", {})
        if distances:
            summary = qm.distance_summary(
                [qm.SpeakerDistanceRecord(i, d) for i, d in sorted(distances.items())]
            )
            reports.write_distance_report(
                {"generated": summary},
                out / "speaker_distances.csv",
                out / "speaker_distances.png" if figures else None,
            )
            report.extra["distance_auc"] = round(summary.auc, 6)
            report.processed += len(distances)

        reference_scores = {
            r.id: r.score_reference
            for r in ctx.manifest.records
            if r.score_reference is not None
        }
        parts = {r.id: r.part for r in ctx.manifest.records}
        for sidecar, label in (("scores_text", "text_grader"), ("scores_audio", "audio_grader")):
            scores = ctx.sidecars.get(sidecar, {})
            if len(scores) < 2 or len(set(scores) & set(reference_scores)) < 2:
                continue
            corr = qm.correlation_stats(scores, reference_scores)
            reports.write_scatter_report(
                corr,
                parts,
                out / f"{label}_scatter.csv",
                out / f"{label}_scatter.png" if figures else None,
                x_label=f"{label} score",
                y_label="reference score",
            )
            report.extra[label] = {
                "pcc": None if corr.pcc is None else round(corr.pcc, 6),
                "src": None if corr.src is None else round(corr.src, 6),
                "rmse": round(corr.rmse, 6),
                "n": corr.n,
            }
            report.processed += corr.n
        return report


class FilterStage:
    name = "filter"
    requires: tuple[str, ...] = ()
    produces_fields: tuple[str, ...] = ()
    produces_sidecars: tuple[str, ...] = ()
    requires_sidecars = ("distances",)

    def __init__(self, config: dict):
        self.config = dict(config)

    def run(self, ctx: RunContext) -> StageReport:
        report = StageReport(name=self.name)
        threshold = float(self.config.get("threshold", 0.4))
        distances = ctx.sidecars.get("distances", {})
        records = [
            qm.SpeakerDistanceRecord(r.id, distances[r.id])
            for r in ctx.manifest.records
            if r.id in distances
        ]
        kept, dropped = qm.filter_by_distance(records, threshold)
        _atomic_write(ctx.out_dir / "kept_ids.txt", "".join(i + "\n" for i in kept))
        _atomic_write(ctx.out_dir / "dropped_ids.txt", "".join(i + "\n" for i in dropped))
        report.processed = len(records)
        report.extra = {
            "threshold": threshold,
            "kept": len(kept),
            "dropped": len(dropped),
        }
        ctx.sidecars["kept_ids"] = {i: True for i in kept}
        return report


class AssembleStage:
    name = "assemble"
    requires: tuple[str, ...] = ()
    produces_fields: tuple[str, ...] = ()
    produces_sidecars: tuple[str, ...] = ()
    requires_sidecars: tuple[str, ...] = ()

    def __init__(self, config: dict):
        self.config = dict(config)

    def run(self, ctx: RunContext) -> StageReport:
        report = StageReport(name=self.name)
        base_manifests = [
            read_manifest(path) for path in self.config.get("base_manifests", [])
        ]
        threshold = self.config.get("threshold")
        distances = ctx.sidecars.get("distances") if threshold is not None else None
        assembled, composition = assemble_dataset(
            base_manifests,
            ctx.manifest,
            threshold=threshold,
            distances=distances,
            suffix=self.config.get("suffix", "-gen"),
        )
        out_path = ctx.out_dir / self.config.get("out", "assembled.jsonl")
        write_manifest(assembled, out_path)
        _atomic_write(
            ctx.out_dir / "composition.txt", render_composition(composition)
        )
        report.processed = len(assembled.records)
        report.extra = composition
        return report


STAGE_CLASSES = {
    "inject": InjectStage,
    "inject-adapter": InjectAdapterStage,
    "disfluency": DisfluencyStage,
    "tts": TtsStage,
    "asr": AsrStage,
    "speaker-embed": SpeakerEmbedStage,
    "grade-text": GradeTextStage,
    "grade-audio": GradeAudioStage,
    "metrics": MetricsStage,
    "filter": FilterStage,
    "assemble": AssembleStage,
}


def _check_plan(plan: StagePlan, manifest: Manifest) -> list:
    """Instantiate stages and statically check field/sidecar availability."""
    stages = []
    for spec in plan.stages:
        if spec.name not in STAGE_CLASSES:
            raise PipelineError(f"unknown stage {spec.name!r}")
        stages.append(STAGE_CLASSES[spec.name](spec.config))

    if manifest.records:
        available = {
            name
            for name in (
                "id", "speaker_id", "part", "audio_original", "text_original",
                "disfluencies", "text_fluent", "text_gec", "text_generated",
                "text_generated_disfluent", "audio_generated", "score_reference",
            )
            if all(getattr(r, name) is not None for r in manifest.records)
        }
    else:
        available = set()
    sidecars: set[str] = set()
    for stage in stages:
        for name in stage.requires:
            if name not in available:
                raise StagePreconditionError(
                    f"stage {stage.name!r} requires field {name!r}, which is "
                    f"neither present on all records nor produced by an "
                    f"earlier stage"
                )
        for name in stage.requires_sidecars:
            if name not in sidecars:
                raise StagePreconditionError(
                    f"stage {stage.name!r} requires {name!r} from an earlier stage"
                )
        available.update(stage.produces_fields)
        sidecars.update(stage.produces_sidecars)
    return stages


def _write_sidecars(ctx: RunContext) -> None:
    order = {r.id: n for n, r in enumerate(ctx.manifest.records)}
    for name, values in sorted(ctx.sidecars.items()):
        if name == "kept_ids":
            continue
        path = ctx.out_dir / f"sidecar_{name.replace('_', '-')}.jsonl"
        lines = [
            json.dumps({"id": rid, "value": values[rid]}, ensure_ascii=False)
            for rid in sorted(values, key=lambda i: order.get(i, len(order)))
        ]
        _atomic_write(path, "".join(line + "\n" for line in lines))


def run_pipeline(
    manifest: Manifest, plan: StagePlan, out_dir, lex=None
) -> tuple[Manifest, RunReport]:
    """Execute the plan over a copy of the manifest; writes the output
    manifest, sidecar files, and the run report into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if plan.cache_dir is not None:
        plan.cache_dir.mkdir(parents=True, exist_ok=True)

    working = Manifest(
        header=manifest.header,
        records=[dataclasses.replace(r, provenance=list(r.provenance)) for r in manifest.records],
    )
    stages = _check_plan(plan, working)
    ctx = RunContext(working, plan, out_dir, lex=lex)
    for stage in stages:
        ctx.report.stages.append(stage.run(ctx))

    write_manifest(working, out_dir / "manifest.jsonl")
    _write_sidecars(ctx)
    _atomic_write(
        out_dir / "run_report.json",
        json.dumps(ctx.report.to_json_obj(), indent=2, sort_keys=True) + "\n",
    )
    _atomic_write(out_dir / "run_report.txt", ctx.report.render_text())
    return working, ctx.report


def assemble_dataset(
    base_manifests: list[Manifest],
    generated: Manifest,
    threshold: Optional[float] = None,
    distances: Optional[dict[str, float]] = None,
    suffix: str = "-gen",
) -> tuple[Manifest, dict]:
    """Concatenate base records with (optionally distance-filtered)
    generated records, suffixing generated ids to keep them distinct."""
    records: list[UtteranceRecord] = []
    ids: set[str] = set()
    composition: dict = {"base": [], "generated": {}}
    for n, base in enumerate(base_manifests):
        label = base.header.split or base.header.corpus or f"base{n}"
        for record in base.records:
            if record.id in ids:
                raise ManifestError(f"duplicate id {record.id!r} across base manifests")
            ids.add(record.id)
            records.append(record)
        composition["base"].append({"source": label, "count": len(base.records)})

    kept = dropped = 0
    for record in generated.records:
        if threshold is not None:
            if distances is None or record.id not in distances:
                raise PipelineError(
                    f"filtering requested but no distance for id {record.id!r}"
                )
            if not (distances[record.id] < threshold):
                dropped += 1
                continue
        kept += 1
        new_id = record.id + suffix
        if new_id in ids:
            raise ManifestError(f"id collision after suffixing: {new_id!r}")
        ids.add(new_id)
        records.append(dataclasses.replace(record, id=new_id))
    composition["generated"] = {
        "total": len(generated.records),
        "kept": kept,
        "dropped": dropped,
        "threshold": threshold,
    }
    header = dataclasses.replace(generated.header, split="assembled")
    return Manifest(header=header, records=records), composition


def render_composition(composition: dict) -> str:
    lines = ["source      count"]
    for entry in composition["base"]:
        lines.append(f"{entry['source']:<10} {entry['count']:>6}")
    gen = composition["generated"]
    label = "Gen"
    if gen.get("threshold") is not None:
        label = f"Gen(<{gen['threshold']})"
    lines.append(f"{label:<10} {gen['kept']:>6}")
    lines.append(f"{'total':<10} {sum(e['count'] for e in composition['base']) + gen['kept']:>6}")
    if gen["dropped"]:
        lines.append(f"(dropped {gen['dropped']} of {gen['total']} generated)")
    return "\n".join(lines) + "\n"


def manifests_identical(a: Manifest, b: Manifest) -> bool:
    return manifest_bytes(a) == manifest_bytes(b)
