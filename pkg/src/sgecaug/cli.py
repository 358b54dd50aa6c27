"""Command-line interface.

Every subcommand is a thin wrapper over the library: single-stage
commands build a one-stage plan, `run` executes a full plan file, and the
report commands write delimited data with figures next to it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import edits as editlab
from . import metrics as qm
from . import reports
from .inject import InjectionConfig, calibrate_injector
from .manifest import Manifest, read_manifest, validate_record, write_manifest
from .pipeline import (
    StagePlan,
    StageSpec,
    assemble_dataset,
    render_composition,
    run_pipeline,
)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", help="input manifest (JSONL)")
    parser.add_argument("--out", help="output directory or file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--config", help="stage config file (JSON)")
    parser.add_argument("--cache-dir", help="stage result cache directory")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument(
        "--timestamp", default="", help="provenance timestamp (pin for reproducible runs)"
    )
    parser.add_argument(
        "--no-figures", action="store_true", help="skip figure rendering in reports"
    )


def _load_config(args) -> dict:
    if not args.config:
        return {}
    return json.loads(Path(args.config).read_text("utf-8"))


def _single_stage(args, name: str, config: dict) -> int:
    if not args.manifest or not args.out:
        print(f"{name}: --manifest and --out are required", file=sys.stderr)
        return 2
    plan = StagePlan(
        stages=[StageSpec(name=name, config=config)],
        seed=args.seed,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        timestamp=args.timestamp,
        jobs=args.jobs,
    )
    manifest = read_manifest(args.manifest)
    _, report = run_pipeline(manifest, plan, args.out)
    print(report.render_text(), end="")
    return 0


def _read_sidecar(path) -> dict:
    values = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                obj = json.loads(line)
                values[obj["id"]] = obj["value"]
    return values


def cmd_validate(args) -> int:
    manifest = read_manifest(args.manifest)
    bad = 0
    for record in manifest.records:
        for violation in validate_record(record):
            print(f"{record.id}: {violation}")
            bad += 1
    print(f"{len(manifest.records)} records, {bad} violations")
    return 1 if bad else 0


def cmd_inject(args) -> int:
    config = _load_config(args)
    if args.calibrate:
        manifest = read_manifest(args.manifest)
        config.setdefault("seed", args.seed)
        report = calibrate_injector(manifest.records, InjectionConfig.from_json_obj(config))
        print(f"records:         {report.n_records}")
        print(f"new_error_rate:  {report.new_error_rate:.4f}")
        print(f"l1_distance:     {report.l1_distance:.4f}")
        print(f"passed:          {report.passed}")
        return 0 if report.passed else 1
    return _single_stage(args, "inject", config)


def cmd_disfluency(args) -> int:
    return _single_stage(args, "disfluency", _load_config(args))


def cmd_tts(args) -> int:
    return _single_stage(args, "tts", _load_config(args))


def cmd_asr(args) -> int:
    return _single_stage(args, "asr", _load_config(args))


def cmd_speaker(args) -> int:
    return _single_stage(args, "speaker-embed", _load_config(args))


def cmd_grade(args) -> int:
    name = "grade-text" if args.kind == "text" else "grade-audio"
    return _single_stage(args, name, _load_config(args))


def cmd_wer(args) -> int:
    manifest = read_manifest(args.manifest)
    if args.hyp_file:
        hyps = _read_sidecar(args.hyp_file)
    else:
        hyps = {
            r.id: getattr(r, args.hyp_field)
            for r in manifest.records
            if getattr(r, args.hyp_field) is not None
        }
    breakdowns = []
    for record in manifest.records:
        reference = getattr(record, args.ref_field)
        if reference is None or record.id not in hyps:
            continue
        breakdowns.append(qm.wer(reference, hyps[record.id]))
    if not breakdowns:
        print("no scored pairs", file=sys.stderr)
        return 1
    pooled = qm.aggregate_wer(breakdowns)
    print(reports.render_wer_table([(args.label, pooled)]), end="")
    return 0


def _corpus_edit_sets(manifest: Manifest, source_field: str, target_field: str):
    edit_sets = []
    for record in manifest.records:
        source = getattr(record, source_field)
        target = getattr(record, target_field)
        if source is None or target is None:
            continue
        edit_sets.append((record.id, editlab.extract_edits(source, target)))
    return edit_sets


def cmd_gec_score(args) -> int:
    manifest = read_manifest(args.manifest)
    hyp_sets = dict(_corpus_edit_sets(manifest, args.source_field, args.hyp_field))
    ref_sets = dict(_corpus_edit_sets(manifest, args.source_field, args.ref_field))
    tp = fp = fn = 0
    for rid in sorted(set(hyp_sets) & set(ref_sets)):
        score = editlab.score_edits(hyp_sets[rid], ref_sets[rid])
        tp += score.tp
        fp += score.fp
        fn += score.fn
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    score = editlab.EditScore(
        triple=editlab.ScoreTriple(precision, recall, editlab.f_half(precision, recall)),
        tp=tp, fp=fp, fn=fn,
    )
    print(reports.render_score_table([(args.label, score)]), end="")
    if args.out:
        payload = {
            "precision": precision, "recall": recall,
            "f_half": score.triple.f_half, "tp": tp, "fp": fp, "fn": fn,
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", "utf-8")
    return 0


def cmd_distribution(args) -> int:
    manifest = read_manifest(args.manifest)
    ref_sets = [e for _, e in _corpus_edit_sets(manifest, args.source_field, args.ref_field)]
    hyp_sets = [e for _, e in _corpus_edit_sets(manifest, args.source_field, args.hyp_field)]
    ref_dist = editlab.error_distribution(ref_sets)
    hyp_dist = editlab.error_distribution(hyp_sets)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    rows = reports.write_distribution_report(
        ref_dist,
        hyp_dist,
        out / "distribution.csv",
        None if args.no_figures else out / "distribution.png",
    )
    for category, ref, hyp in rows:
        print(f"{category:<12} ref={ref:.3f} hyp={hyp:.3f}")
    return 0


def cmd_sla_corr(args) -> int:
    predicted_maps = [reports.read_score_file(p)[0] for p in args.predicted]
    reference, parts = reports.read_score_file(args.reference)
    if args.calibrate and args.order == "calibrate-first":
        calibrated = [
            qm.calibrate_per_part(m, reference, parts).calibrated
            for m in predicted_maps
        ]
        final = qm.ensemble_scores(dict(enumerate(calibrated)))
    else:
        final = qm.ensemble_scores(dict(enumerate(predicted_maps)))
        if args.calibrate:
            final = qm.calibrate_per_part(final, reference, parts).calibrated
    corr = qm.correlation_stats(final, reference)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    reports.write_scatter_report(
        corr,
        parts,
        out / "sla_scatter.csv",
        None if args.no_figures else out / "sla_scatter.png",
        x_label="predicted",
        y_label="reference",
    )
    pcc = "n/a" if corr.pcc is None else f"{corr.pcc:.4f}"
    src = "n/a" if corr.src is None else f"{corr.src:.4f}"
    print(f"n={corr.n} pcc={pcc} src={src} rmse={corr.rmse:.4f}")
    return 0


def cmd_filter(args) -> int:
    distances = _read_sidecar(args.distances)
    records = [
        qm.SpeakerDistanceRecord(rid, float(d)) for rid, d in distances.items()
    ]
    kept, dropped = qm.filter_by_distance(records, args.threshold)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "kept_ids.txt").write_text("".join(i + "\n" for i in kept), "utf-8")
    (out / "dropped_ids.txt").write_text("".join(i + "\n" for i in dropped), "utf-8")
    print(f"kept {len(kept)}, dropped {len(dropped)} (threshold {args.threshold})")
    return 0


def cmd_assemble(args) -> int:
    bases = [read_manifest(p) for p in args.base]
    generated = read_manifest(args.generated)
    distances = _read_sidecar(args.distances) if args.distances else None
    assembled, composition = assemble_dataset(
        bases, generated, threshold=args.threshold, distances=distances,
        suffix=args.suffix,
    )
    write_manifest(assembled, args.out)
    print(render_composition(composition), end="")
    return 0


def cmd_run(args) -> int:
    plan_obj = json.loads(Path(args.plan).read_text("utf-8"))
    plan = StagePlan.from_json_obj(plan_obj)
    if args.cache_dir:
        plan.cache_dir = Path(args.cache_dir)
    if args.seed:
        plan.seed = args.seed
    if args.jobs != 1:
        plan.jobs = args.jobs
    if args.timestamp:
        plan.timestamp = args.timestamp
    manifest = read_manifest(args.manifest)
    _, report = run_pipeline(manifest, plan, args.out)
    print(report.render_text(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgecaug",
        description="Spoken-GEC corpus augmentation and quality metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check record invariants")

    p = add("inject", cmd_inject, "inject grammatical errors (rule engine)")
    p.add_argument("--calibrate", action="store_true",
                   help="report new-error rate and distribution divergence instead")

    add("disfluency", cmd_disfluency, "reinsert disfluencies into generated text")
    add("tts", cmd_tts, "synthesize audio via a TTS adapter")
    add("asr", cmd_asr, "transcribe generated audio via an ASR adapter")
    add("speaker", cmd_speaker, "speaker-embedding distances via an adapter")

    p = add("grade", cmd_grade, "SLA grading via an adapter")
    p.add_argument("--kind", choices=["text", "audio"], default="text")

    p = add("wer", cmd_wer, "word error rate with S/D/I decomposition")
    p.add_argument("--ref-field", default="text_generated_disfluent")
    p.add_argument("--hyp-field", default="text_original")
    p.add_argument("--hyp-file", help="sidecar JSONL with hypothesis tokens")
    p.add_argument("--label", default="Corpus")

    p = add("gec-score", cmd_gec_score, "span-level P/R/F0.5 edit scoring")
    p.add_argument("--source-field", default="text_original")
    p.add_argument("--hyp-field", default="text_generated")
    p.add_argument("--ref-field", default="text_gec")
    p.add_argument("--label", default="Corpus")

    p = add("distribution", cmd_distribution, "error-category distribution report")
    p.add_argument("--source-field", default="text_gec")
    p.add_argument("--ref-field", default="text_original")
    p.add_argument("--hyp-field", default="text_generated")

    p = add("sla-corr", cmd_sla_corr, "score correlation report (PCC/SRC/RMSE)")
    p.add_argument("--predicted", action="append", required=True,
                   help="predicted score CSV; repeat for a seed ensemble")
    p.add_argument("--reference", required=True, help="reference score CSV")
    p.add_argument("--calibrate", action="store_true",
                   help="linear per-part calibration against the reference")
    p.add_argument("--order", choices=["ensemble-first", "calibrate-first"],
                   default="ensemble-first")

    p = add("filter", cmd_filter, "keep ids with distance strictly below threshold")
    p.add_argument("--distances", required=True, help="distances sidecar JSONL")
    p.add_argument("--threshold", type=float, default=0.4)

    p = add("assemble", cmd_assemble, "assemble a training manifest")
    p.add_argument("--base", action="append", default=[], help="base manifest; repeatable")
    p.add_argument("--generated", required=True)
    p.add_argument("--distances", help="distances sidecar JSONL")
    p.add_argument("--threshold", type=float)
    p.add_argument("--suffix", default="-gen")

    p = add("run", cmd_run, "execute a full stage plan")
    p.add_argument("--plan", required=True, help="plan file (JSON)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
