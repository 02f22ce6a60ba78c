"""Command-line entry point: ``ragaemotion <subcommand> ...``.

Every subcommand takes ``--config`` (JSON run configuration), ``--format``
(csv or json for tabular outputs), ``--output-dir`` and ``--no-timestamp``.
The exit status is 0 only when no input item failed.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import itertools
import json
import math
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ragaemotion import __version__
from ragaemotion import reference
from ragaemotion.audio_ingest import (
    ManifestError,
    WavDecodeError,
    atomic_write_text,
    decode_wav,
    load_manifest,
    load_pitch_csv,
    save_pitch_csv,
)
from ragaemotion.descriptive_stats import InsufficientDataError, ZeroVarianceError, describe_partial, five_number_summary
from ragaemotion.emotion_model import (
    RankColumnWarning,
    RankKey,
    RankTieError,
    build_rank_columns,
    build_signature,
    classify_clip,
    evolution_report,
    rank_emotions,
    load_signature_store,
    ordering_concordance,
    save_signature_store,
    stack_sequences,
    track_direction,
)
from ragaemotion.hypothesis_tests import Center, ks_normality, levene
from ragaemotion.labels import CANONICAL_ORDER, EmotionLabel, parse_emotion
from ragaemotion.pitch_tracker import PitchConfig, PitchSequence, extract_f0, voiced_values
from ragaemotion.steady_state import SteadyConfig, detect_steady_states, segments_csv, tempo


@dataclass(frozen=True)
class RunConfig:
    pitch: PitchConfig = field(default_factory=PitchConfig)
    steady: SteadyConfig = field(default_factory=SteadyConfig)
    alpha: float = 0.05
    mssd_halve: bool = True
    mssd_rel_tol: float = 0.25
    output_dir: str = "out"
    format: str = "csv"

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 0.5:
            raise ValueError("alpha must lie in (0, 0.5]")
        if self.mssd_rel_tol < 0:
            raise ValueError("mssd_rel_tol must be non-negative")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        data = dict(data)
        if "pitch" in data:
            data["pitch"] = PitchConfig.from_dict(data["pitch"])
        if "steady" in data:
            data["steady"] = SteadyConfig.from_dict(data["steady"])
        if "format" in data:
            data["format"] = str(data["format"]).lower()
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


class CommandError(Exception):
    pass


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


class Reporter:
    """Writes tabular outputs in the configured format and tracks per-item failures."""

    def __init__(self, cfg: RunConfig, timestamp: bool):
        self.cfg = cfg
        self.out = Path(cfg.output_dir)
        self.generated = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat() if timestamp else None
        self.failures = 0

    def fail(self, message: str) -> None:
        self.failures += 1
        print(f"error: {message}", file=sys.stderr)

    def warn(self, message: str) -> None:
        print(f"warning: {message}", file=sys.stderr)

    def table(self, stem: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
        if self.cfg.format == "json":
            doc = {"columns": list(header), "rows": [dict(zip(header, map(_plain, r))) for r in rows]}
            return self.json(stem, doc)
        buf = io.StringIO()
        if self.generated:
            buf.write(f"# generated: {self.generated}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        path = self.out / f"{stem}.csv"
        atomic_write_text(path, buf.getvalue())
        return path

    def json(self, stem: str, doc: dict) -> Path:
        if self.generated:
            doc = {"generated": self.generated, **doc}
        path = self.out / f"{stem}.json"
        atomic_write_text(path, json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n")
        return path


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return None if math.isnan(v) or math.isinf(v) else v
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, "display"):
        return value.display
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf"
        return f"{float(value):.6f}"
    if hasattr(value, "display"):
        return value.display
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return str(value)


def _load_sequence(path: Path, cfg: RunConfig) -> PitchSequence:
    if path.suffix.lower() == ".wav":
        return extract_f0(decode_wav(path), cfg.pitch)
    return load_pitch_csv(path)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_extract(args, cfg: RunConfig, rep: Reporter) -> None:
    summary = []
    for raw in args.audio:
        path = Path(raw)
        try:
            seq = extract_f0(decode_wav(path), cfg.pitch)
        except (WavDecodeError, ValueError) as exc:
            rep.fail(f"{path}: {exc}")
            continue
        save_pitch_csv(seq, rep.out / f"{path.stem}.csv")
        row = [path.stem, len(seq), seq.voiced_fraction]
        if args.segments:
            segs = detect_steady_states(seq, cfg.steady)
            atomic_write_text(rep.out / f"{path.stem}_segments.csv", segments_csv(segs))
            row.append(len(segs))
        summary.append(row)
        line = f"{path.stem}: frames={len(seq)} voiced={seq.voiced_fraction:.3f}"
        if args.segments:
            line += f" steady_states={row[-1]}"
        print(line)
    header = ["clip_id", "frames", "voiced_fraction"] + (["steady_states"] if args.segments else [])
    if summary:
        rep.table("extract_summary", header, summary)


def _signature_rankings(sigs, rep: Reporter) -> None:
    orders = {}
    for key in RankKey:
        try:
            orders[key] = rank_emotions_safe(sigs, key)
        except RankTieError as exc:
            rep.warn(f"ranking by {key.value.lower()}: {exc}")
        except ValueError as exc:
            rep.warn(f"ranking by {key.value.lower()} unavailable: {exc}")
    rows = []
    for key, order in orders.items():
        print(f"rank by {key.value.lower():8s}: " + " > ".join(e.display for e in order))
        rows.extend((key.value, i + 1, e) for i, e in enumerate(order))
    if len(orders) == len(RankKey):
        same = len({tuple(o) for o in orders.values()}) == 1
        print("concordance: " + ("identical order under tempo, variance and MSSD" if same
                                 else "orders differ between keys"))
    if rows:
        rep.table("rankings", ["key", "position", "emotion"], rows)


def rank_emotions_safe(sigs, key):
    # fixture stores may lack a key entirely; rank whatever carries it
    usable = [s for s in sigs if {RankKey.TEMPO: s.tempo, RankKey.VARIANCE: s.variance, RankKey.MSSD: s.mssd}[key] is not None]
    return rank_emotions(usable, key)


def cmd_signatures(args, cfg: RunConfig, rep: Reporter) -> None:
    manifest = load_manifest(args.manifest)
    store_path = rep.out / "signatures.json"
    if manifest.signature_source:
        sigs = load_signature_store(manifest.signature_source)
        print(f"loaded {len(sigs)} signatures from {manifest.signature_source}")
        save_signature_store(sigs, store_path)
        _signature_rankings(sigs, rep)
        return
    if not manifest.records:
        raise CommandError("manifest has no records and no signature_source")

    by_emotion: dict = {e: [] for e in CANONICAL_ORDER}
    for rec in manifest.records:
        labels = rec.previous_emotions if args.label_source == "previous" else (
            (rec.present_emotion,) if rec.present_emotion is not None else ())
        if not labels:
            continue
        if rec.source_path is None:
            rep.fail(f"{rec.clip_id}: no source_path")
            continue
        try:
            seq = _load_sequence(Path(rec.source_path), cfg)
        except (OSError, ValueError) as exc:
            rep.fail(f"{rec.clip_id}: {exc}")
            continue
        for label in labels:
            by_emotion[label].append(seq)

    absent = [e for e, seqs in by_emotion.items() if not seqs]
    if absent:
        print("absent emotions (no clips): " + ", ".join(e.display for e in absent))
    sigs = []
    for emotion, seqs in by_emotion.items():
        if not seqs:
            continue
        try:
            stacked = stack_sequences(seqs, [emotion] * len(seqs), emotion)
            t = tempo(seqs, cfg.steady)
            sigs.append(build_signature(stacked, t, emotion, n_clips=len(seqs), mssd_halve=cfg.mssd_halve))
        except (InsufficientDataError, ZeroVarianceError, ValueError) as exc:
            rep.fail(f"{emotion.display}: {exc}")
    if not sigs:
        raise CommandError("no signature could be built")
    save_signature_store(sigs, store_path)
    print(f"wrote {len(sigs)} signatures to {store_path}")
    rep.table(
        "signature_summary",
        ["emotion", "rank", "n_clips", "n_values", "tempo", "variance", "sd", "mssd", "skewness", "kurtosis"],
        [(s.emotion, s.rank, s.n_clips, s.descriptors.n, s.tempo, s.variance, s.sd, s.mssd,
          s.descriptors.skewness, s.descriptors.kurtosis_excess) for s in sigs],
    )
    rep.table("absent_emotions", ["emotion", "rank"], [(e, e.rank) for e in absent])
    _signature_rankings(sigs, rep)


def _ordering_reference(source: str) -> list[dict]:
    if source == "sitar":
        return reference.published_sitar()
    return json.loads(Path(source).read_text(encoding="utf-8"))


def cmd_classify(args, cfg: RunConfig, rep: Reporter) -> None:
    sigs = load_signature_store(args.store)
    missing = [s.emotion.display for s in sigs if s.stacked is None]
    if missing:
        raise CommandError(
            f"signature store lacks stacked sequences for {', '.join(missing)}; "
            "re-run `ragaemotion signatures` to write them next to the store"
        )
    seq = _load_sequence(Path(args.clip), cfg)
    values = voiced_values(seq)
    try:
        cands = classify_clip(values, sigs, cfg.alpha, cfg.mssd_rel_tol, cfg.mssd_halve)
    except (InsufficientDataError, ZeroVarianceError) as exc:
        raise CommandError(str(exc)) from None
    rep.table(
        f"classify_{seq.clip_id}",
        ["emotion", "levene_w", "levene_p", "mssd_rel_diff", "matched"],
        [(c.emotion, c.levene_w, c.levene_p, c.mssd_rel_diff, c.matched) for c in cands],
    )
    matches = [c for c in cands if c.matched]
    for c in cands:
        flag = "match" if c.matched else "-"
        print(f"{c.emotion.display:9s} p={c.levene_p:.4f} mssd_rel_diff={c.mssd_rel_diff:.3f} {flag}")
    if matches:
        print(f"top match: {matches[0].emotion.display}")
    else:
        print("no match: emotion changed or unknown")
    if args.ordering:
        rows = _ordering_reference(args.ordering)
        taus = {}
        for measure in ("sd", "mssd"):
            taus[measure] = ordering_concordance({parse_emotion(r["emotion"]): r[measure] for r in rows})
            print(f"ordering concordance ({measure}): kendall tau = {taus[measure]:+.2f}")
        mean_tau = sum(taus.values()) / len(taus)
        verdict = "preserved on average" if mean_tau > 0 else "not preserved"
        print(f"relative emotion ordering {verdict} (mean tau {mean_tau:+.2f})")
        rep.table("ordering_concordance", ["measure", "kendall_tau"], sorted(taus.items()))


def _write_evolution(report, table, rep: Reporter, compare: bool) -> None:
    rep.table("rank_pairs", ["raga", "prev_rank", "present_rank"],
              [(r.raga, r.prev_rank, r.present_rank) for r in table.rows])
    rep.table(
        "overall_descriptors",
        ["column", "n", "variance", "iqr", "skewness", "kurtosis"],
        [(name, d.n, d.variance, d.iqr, d.skewness, d.kurtosis_excess)
         for name, d in (("previous", report.overall_prev), ("present", report.overall_present))],
    )
    rep.table(
        "per_emotion",
        ["emotion", "n", "mean_previous", "mean_now", "sd_now", "iqr_now"],
        [(e, ev.n, e.rank, ev.mean_now, ev.sd_now, ev.iqr_now) for e, ev in report.per_emotion.items()],
    )
    rep.table(
        "rank_differences",
        ["emotion", "raga", "prev_rank", "present_rank", "difference"],
        [(EmotionLabel.from_rank(r.prev_rank), r.raga, r.prev_rank, r.present_rank, r.present_rank - r.prev_rank)
         for r in sorted(table.rows, key=lambda r: r.prev_rank)],
    )
    rep.table(
        "difference_summary",
        ["emotion", "mean_diff", "sd_diff"],
        [(e, ev.mean_diff, ev.sd_diff) for e, ev in report.per_emotion.items()],
    )
    rep.table(
        "histogram",
        ["rank", "count_prev", "count_present"],
        [(r, report.histogram_prev[r], report.histogram_present[r]) for r in range(1, 8)],
    )
    doc = {"report": report.to_dict(), "rows": len(table)}
    if compare:
        doc["published_comparison"] = {
            "per_emotion": reference.compare_with_published(report),
            "overall": reference.compare_overall_with_published(report),
            "published_anger": reference.published_anger_summary(),
        }
    rep.json("evolution_report", doc)


def cmd_evolve(args, cfg: RunConfig, rep: Reporter) -> None:
    manifest = load_manifest(args.manifest)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RankColumnWarning)
        try:
            table = build_rank_columns(manifest.records)
        except ValueError as exc:
            raise CommandError(str(exc)) from None
    for w in caught:
        rep.warn(str(w.message))
    if len(table) == 0:
        raise CommandError("no raga has both previous and present labels")
    report = evolution_report(table)
    _write_evolution(report, table, rep, args.compare_published)

    print(f"rank pairs: {len(table)}")
    for name, d in (("previous", report.overall_prev), ("present", report.overall_present)):
        print(f"{name:8s} variance={_fmt(d.variance)} iqr={_fmt(d.iqr)} "
              f"skewness={_fmt(d.skewness)} kurtosis={_fmt(d.kurtosis_excess)}")
    for e, ev in report.per_emotion.items():
        print(f"{e.display:9s} n={ev.n:2d} mean_now={ev.mean_now:.3f} sd_now={_fmt(ev.sd_now)} "
              f"mean_diff={ev.mean_diff:+.3f}")
    never_previous = [e.display for e in CANONICAL_ORDER if e not in report.per_emotion]
    if never_previous:
        print("no previous occurrences (rank differences undefined): " + ", ".join(never_previous))
    if args.compare_published:
        for row in reference.compare_with_published(report):
            if not row["agrees"]:
                derived = "absent" if row["derived"] is None else f"{row['derived']:.3f}"
                rep.warn(f"{row['emotion']} {row['quantity']}: derived {derived}, published {row['published']:.3f}")
        anger = reference.published_anger_summary()
        rep.warn(f"published Anger differences {anger['differences']} give mean {anger['mean_diff']:.3f}, "
                 f"sd {anger['sd_diff']:.3f}; shown alongside the rule-derived values")


def _shifts_from(args) -> dict:
    if args.manifest:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankColumnWarning)
            report = evolution_report(build_rank_columns(load_manifest(args.manifest).records))
        return {e: ev.mean_diff for e, ev in report.per_emotion.items()}
    if args.shifts == "published":
        return {e: v["mean_diff"] for e, v in reference.published_differences().items()}
    doc = json.loads(Path(args.shifts).read_text(encoding="utf-8"))
    return {parse_emotion(k): float(v["mean_diff"] if isinstance(v, dict) else v) for k, v in doc.items()}


def cmd_track(args, cfg: RunConfig, rep: Reporter) -> None:
    if not args.manifest and not args.shifts:
        raise CommandError("give --manifest or --shifts to define the expected direction of change")
    prev = {s.emotion: s for s in load_signature_store(args.prev_store)}
    now = {s.emotion: s for s in load_signature_store(args.now_store)}
    shifts = _shifts_from(args)
    rows = []
    boxes = []
    for emotion in CANONICAL_ORDER:
        if emotion not in prev and emotion not in now:
            continue
        p, n = prev.get(emotion), now.get(emotion)
        base = [emotion, None if p is None else p.sd, None if n is None else n.sd,
                None if p is None else p.mssd, None if n is None else n.mssd]
        if p is None or n is None or emotion not in shifts or None in base[1:]:
            rows.append(base + [None, None, None, shifts.get(emotion), None, None, None, "insufficient data"])
            print(f"{emotion.display:9s} insufficient data")
        else:
            v = track_direction(p, n, shifts[emotion], emotion)
            rows.append(base + [v.sd_direction, v.mssd_direction, v.expected_direction, v.mean_rank_shift,
                                v.consistent_sd, v.consistent_mssd, v.consistent, "ok"])
            overall = {True: "consistent", False: "inconsistent", None: "shift too small for a verdict"}[v.consistent]
            print(f"{emotion.display:9s} sd {v.sd_direction.value:8s} mssd {v.mssd_direction.value:8s} "
                  f"expected {v.expected_direction.value:8s} ({overall})")
        for epoch, sig in (("previous", p), ("now", n)):
            if sig is not None and sig.stacked is not None:
                q = five_number_summary(sig.stacked)
                boxes.append((emotion, epoch, q["min"], q["q1"], q["median"], q["q3"], q["max"]))
    rep.table(
        "tracking",
        ["emotion", "sd_prev", "sd_now", "mssd_prev", "mssd_now", "sd_direction", "mssd_direction",
         "expected_direction", "mean_rank_shift", "consistent_sd", "consistent_mssd", "consistent", "status"],
        rows,
    )
    rep.table("boxplot_quartiles", ["emotion", "epoch", "min", "q1", "median", "q3", "max"], boxes)


def cmd_describe(args, cfg: RunConfig, rep: Reporter) -> None:
    rows = []
    for raw in args.inputs:
        path = Path(raw)
        try:
            values = voiced_values(_load_sequence(path, cfg))
            d = describe_partial(values, mssd_halve=cfg.mssd_halve)
            ks = ks_normality(values, cfg.alpha) if values.size >= 8 and d.variance else None
        except (OSError, ValueError) as exc:
            rep.fail(f"{path}: {exc}")
            continue
        rows.append((path.stem, d.n, d.mean, d.variance, d.sd, d.skewness, d.kurtosis_excess, d.mssd, d.iqr,
                     None if ks is None else ks.statistic, None if ks is None else ks.p_value,
                     None if ks is None else ks.reject))
        print(f"{path.stem}: n={d.n} variance={_fmt(d.variance)} mssd={_fmt(d.mssd)} "
              f"skewness={_fmt(d.skewness)} kurtosis={_fmt(d.kurtosis_excess)}")
    rep.table("descriptors", ["sequence", "n", "mean", "variance", "sd", "skewness", "kurtosis", "mssd", "iqr",
                              "ks_statistic", "ks_p_value", "ks_reject"], rows)


def cmd_test(args, cfg: RunConfig, rep: Reporter) -> None:
    seqs = {}
    if args.store:
        for s in load_signature_store(args.store):
            if s.stacked is None:
                rep.fail(f"{s.emotion.display}: no stacked sequence next to the store")
            else:
                seqs[s.emotion.display] = s.stacked
    for raw in args.inputs:
        try:
            seqs[Path(raw).stem] = voiced_values(_load_sequence(Path(raw), cfg))
        except (OSError, ValueError) as exc:
            rep.fail(f"{raw}: {exc}")
    rows = []
    for name, values in seqs.items():
        try:
            r = ks_normality(values, cfg.alpha)
        except ValueError as exc:
            rep.fail(f"{name}: {exc}")
            continue
        rows.append((r.method, name, "", r.statistic, r.p_value, r.alpha, r.reject))
    center = Center(args.center.upper())
    for (a, xa), (b, xb) in itertools.combinations(seqs.items(), 2):
        try:
            r = levene([xa, xb], center, cfg.alpha)
        except ValueError as exc:
            rep.fail(f"{a} vs {b}: {exc}")
            continue
        rows.append((r.method, a, b, r.statistic, r.p_value, r.alpha, r.reject))
        verdict = "differ" if r.reject else "do not differ"
        print(f"{a} vs {b}: W={r.statistic:.4f} p={r.p_value:.4f} variances {verdict}")
    rep.table("tests", ["method", "first", "second", "statistic", "p_value", "alpha", "reject"], rows)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--format", choices=["csv", "json"], help="format of tabular outputs")
    p.add_argument("--output-dir", help="directory for output files")
    p.add_argument("--alpha", type=float, help="significance level")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generation timestamp from reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragaemotion",
        description="Pitch-variability signatures of emotion in Hindustani raga recordings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="pitch contours from WAV files")
    p.add_argument("audio", nargs="+")
    p.add_argument("--segments", action="store_true", help="also write steady-state segment CSVs")
    _common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("signatures", help="build and rank emotion signatures from a manifest")
    p.add_argument("manifest")
    p.add_argument("--label-source", choices=["previous", "present"], default="present")
    _common(p)
    p.set_defaults(func=cmd_signatures)

    p = sub.add_parser("classify", help="match a clip against stored signatures")
    p.add_argument("clip", help="pitch CSV or WAV of the clip")
    p.add_argument("--store", required=True, help="signature store JSON")
    p.add_argument("--ordering", help="JSON list of {emotion, sd, mssd} to check against the canonical order; "
                                      "'sitar' uses the bundled sitar values")
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evolve", help="previous/present rank columns and their statistics")
    p.add_argument("manifest")
    p.add_argument("--compare-published", action="store_true",
                   help="warn where derived values differ from the bundled published tables")
    _common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("track", help="SD/MSSD direction of change between two signature stores")
    p.add_argument("prev_store")
    p.add_argument("now_store")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--manifest", help="derive mean rank shifts from this manifest")
    g.add_argument("--shifts", help="JSON {emotion: shift} file, or 'published' for the bundled values")
    _common(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("describe", help="descriptors and KS normality of pitch sequences")
    p.add_argument("inputs", nargs="+")
    _common(p)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("test", help="KS normality and pairwise Levene tests")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--store", help="include the stacked sequences of this signature store")
    p.add_argument("--center", choices=["median", "mean"], default="median")
    _common(p)
    p.set_defaults(func=cmd_test)
    return parser


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {}
    if args.format:
        overrides["format"] = args.format
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    return replace(cfg, **overrides) if overrides else cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (OSError, ValueError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    rep = Reporter(cfg, timestamp=not args.no_timestamp)
    try:
        args.func(args, cfg, rep)
    except (CommandError, ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1 if rep.failures else 0


if __name__ == "__main__":
    sys.exit(main())
