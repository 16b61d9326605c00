"""End-to-end experiment driver and machine-readable reports.

``run_experiment`` wires the full pipeline (load or generate data, block,
encode, run the chosen pattern/scheme over the simulated network, score
quality and optionally privacy) and returns a report whose embedded,
fully resolved configuration reproduces the run bit-identically apart
from wall-clock timings.

Reports are plain text: ``key = value`` lines grouped into sections,
plus pipe-separated table rows, so diffs stay human-readable.  The
format is versioned by the schema string.
"""

from __future__ import annotations

import csv
import time
import zlib
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Sequence

from .datagen import CorruptionSpec, generate, sample_base_population
from .encoding import BfParams, BloomFilter, Record
from .evaluation import bf_attack, cbf_attack, confusion_from_matches, f_measure
from .protocol import (
    NAI,
    LinkageConfig,
    LinkageRun,
    count_candidates,
    party_name,
)

REPORT_SCHEMA = "pprl-cbf/1"

STANDARD_QIDS = ("first_name", "last_name", "city", "zipcode")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one linkage experiment depends on.

    Defaults follow the usual desk settings: l=500 bits, k=20 hash
    functions, bigrams, similarity threshold 0.8, and the four standard
    quasi-identifiers with name-based blocking.
    """

    # data: either CSV paths (one per party) or a generation spec
    dataset_paths: tuple[str, ...] = ()
    gen_parties: int = 3
    gen_size: int = 1000
    gen_overlap: float = 0.5
    gen_corruption_rate: float = 0.0
    gen_modifications: int = 2
    gen_skew: float = 1.0
    # encoding
    l: int = 500
    k: int = 20
    q: int = 2
    pad_grams: bool = False
    hash_seed_a: int = 0x5BD1E995
    hash_seed_b: int = 0xC6A4A793
    # linkage
    s_t: float = 0.8
    pattern: str = "SEQ"
    scheme: str = "SSS"
    r_m: int = 2
    blocking_attrs: tuple[str, ...] = ("first_name", "last_name")
    qid_attrs: tuple[str, ...] = STANDARD_QIDS
    seq_dice_denominator: str = "accumulated"
    per_ring_seeds: bool = False
    paillier_bits: int = 512
    accounting: str = "nominal"
    # run
    seed: int = 42
    evaluate_privacy: bool = False
    out_path: str = ""

    def bf_params(self) -> BfParams:
        return BfParams(
            l=self.l,
            k=self.k,
            q=self.q,
            hash_seed_a=self.hash_seed_a,
            hash_seed_b=self.hash_seed_b,
            pad_grams=self.pad_grams,
        )


@dataclass
class LinkageReport:
    """Self-describing run outcome; every field lands in the emitted text."""

    schema: str
    config: dict
    matches: list[tuple[str, float]]
    counts: dict
    traffic: dict
    timings: dict
    quality: dict | None
    privacy: dict | None
    flags: dict


class IngestError(ValueError):
    pass


def csv_columns(path: str | Path) -> tuple[str, ...]:
    """Header columns of a party CSV, entity_id excluded."""
    with open(path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), None)
    if not header:
        raise IngestError(f"{path}: empty file, expected a header row")
    if "entity_id" not in header:
        raise IngestError(f"{path}: header lacks the entity_id column")
    return tuple(c for c in header if c != "entity_id")


def ingest_csv(path: str | Path) -> list[Record]:
    """Read one party's records in file order.

    The header must name ``entity_id`` plus at least one QID column.
    Values are whitespace-trimmed and lowercased here, matching the
    normalization the encoder applies.  Malformed rows fail with their
    line number; duplicate entity ids are accepted (real databases have
    them) and are flagged later in the report.
    """
    records: list[Record] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise IngestError(f"{path}: empty file, expected a header row")
        try:
            id_col = header.index("entity_id")
        except ValueError:
            raise IngestError(f"{path}: header lacks the entity_id column") from None
        if len(header) < 2:
            raise IngestError(f"{path}: no QID columns besides entity_id")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestError(
                    f"{path}: line {line_no}: expected {len(header)} fields, got {len(row)}"
                )
            qids = tuple(
                value.strip().lower() for i, value in enumerate(row) if i != id_col
            )
            records.append(Record(row[id_col], qids))
    return records


def _attr_indices(names: Sequence[str], columns: Sequence[str], what: str) -> tuple[int, ...]:
    indices = []
    for name in names:
        if name not in columns:
            raise ValueError(f"{what} attribute {name!r} not among columns {list(columns)}")
        indices.append(columns.index(name))
    return tuple(indices)


def _load_databases(config: ExperimentConfig):
    if config.dataset_paths:
        columns = csv_columns(config.dataset_paths[0])
        for path in config.dataset_paths[1:]:
            if csv_columns(path) != columns:
                raise IngestError(f"{path}: column set differs from {config.dataset_paths[0]}")
        return [ingest_csv(p) for p in config.dataset_paths], columns
    n_overlap = round(config.gen_overlap * config.gen_size)
    needed = n_overlap + config.gen_parties * (config.gen_size - n_overlap)
    base = sample_base_population(
        needed + needed // 10 + 1,
        seed=config.seed ^ 0xBA5E,
        skew=config.gen_skew,
    )
    spec = CorruptionSpec(
        corruption_rate=config.gen_corruption_rate,
        modifications_per_record=config.gen_modifications,
        seed=config.seed ^ 0xC0DE,
    )
    dataset = generate(
        base,
        p=config.gen_parties,
        n=config.gen_size,
        overlap=config.gen_overlap,
        spec=spec,
        seed=config.seed,
    )
    return dataset.parties, STANDARD_QIDS


def _closed_form(run: LinkageRun) -> tuple[int | None, str]:
    """Worst-case formula value when the uniform-block idealization holds."""
    sizes = {len(db) for db in run.databases}
    if len(sizes) != 1:
        return None, "party sizes differ"
    n = sizes.pop()
    b = len(run.common_blocks)
    if b == 0:
        return None, "no common blocks"
    block_sizes = {
        len(owner.blocks[key])
        for owner in run.owners
        for key in run.common_blocks
    }
    if len(block_sizes) != 1:
        return None, "block sizes not uniform"
    m = block_sizes.pop()
    if b * m != n:
        return None, "records outside common blocks"
    pattern = run.config.pattern
    if pattern == NAI:
        return count_candidates(NAI, n, b, run.p), "uniform blocks"
    ring_sizes = {len(r) for r in run.plan.rings}
    if len(ring_sizes) != 1:
        return None, "ring sizes not uniform"
    r = ring_sizes.pop()
    if run.p % r:
        return None, "ring size does not divide p"
    return count_candidates(pattern, n, b, run.p, r), "uniform blocks"


def _member_string(member_records: tuple[tuple[int, int], ...]) -> str:
    return ",".join(f"{party_name(p)}:{rec}" for p, rec in member_records)


def run_experiment(config: ExperimentConfig) -> LinkageReport:
    """Execute blocking, encoding, the pattern driver and the evaluation."""
    t_start = time.perf_counter()
    databases, columns = _load_databases(config)
    data_time = time.perf_counter() - t_start

    link_config = LinkageConfig(
        params=config.bf_params(),
        s_t=config.s_t,
        pattern=config.pattern,
        scheme=config.scheme,
        r_m=config.r_m,
        blocking_attrs=_attr_indices(config.blocking_attrs, columns, "blocking"),
        qid_attrs=_attr_indices(config.qid_attrs, columns, "QID"),
        seed=config.seed,
        seq_dice_denominator=config.seq_dice_denominator,
        per_ring_seeds=config.per_ring_seeds,
        paillier_bits=config.paillier_bits,
        accounting=config.accounting,
    )
    run = LinkageRun(databases, link_config)
    matches = run.execute()

    t_eval = time.perf_counter()
    counts = confusion_from_matches(matches, databases)
    try:
        quality = {
            "tp": counts.true_positives,
            "fp": counts.false_positives,
            "fn": counts.false_negatives,
            "f_measure": f_measure(counts),
        }
    except ValueError:
        quality = None

    privacy = None
    if config.evaluate_privacy:
        own_bfs = [BloomFilter(row) for row in run.owners[0].bf_matrix]
        bf_result = bf_attack(own_bfs, own_bfs)
        privacy = {
            "bf_dr_mean": bf_result.dr_mean,
            "bf_dr_marketer": bf_result.dr_marketer,
        }
        observed = [(c.cbf, c.contributors) for c in run.matched_candidates]
        if observed:
            cbf_result = cbf_attack(observed, own_bfs)
            privacy["cbf_dr_mean"] = cbf_result.dr_mean
            privacy["cbf_dr_marketer"] = cbf_result.dr_marketer
    eval_time = time.perf_counter() - t_eval

    closed_form, closed_note = _closed_form(run)
    duplicates = {
        party_name(i): len(db) - len({r.entity_id for r in db})
        for i, db in enumerate(databases)
    }

    resolved = asdict(config)
    resolved["p"] = len(databases)
    resolved["n_per_party"] = tuple(len(db) for db in databases)
    report = LinkageReport(
        schema=REPORT_SCHEMA,
        config=resolved,
        matches=[(_member_string(m.member_records), m.similarity) for m in matches],
        counts={
            "common_blocks": len(run.common_blocks),
            "candidate_sets_classified": run.counters["classified"],
            "summation_formations": run.counters["formations"],
            "phase2_combinations": run.counters["phase2_combos"],
            "stage_formations": tuple(run.counters["stage_formations"]),
            "observed_candidates": run.observed_candidates(),
            "closed_form_candidates": closed_form,
            "closed_form_note": closed_note,
        },
        traffic=run.network.ledger.snapshot(),
        timings={**run.timings, "data": data_time, "evaluation": eval_time},
        quality=quality,
        privacy=privacy,
        flags={"duplicate_entity_ids": duplicates},
    )
    report._run = run  # handy for callers; never serialized
    if config.out_path:
        emit_report(report, config.out_path)
    return report


# -- report serialization ----------------------------------------------------


def _format_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, dict):
        return ",".join(f"{k}:{_format_value(v)}" for k, v in sorted(value.items()))
    return str(value)


def _parse_value(text: str):
    if text == "n/a":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def emit_report(report: LinkageReport, path: str | Path) -> None:
    """Write the report as versioned, diffable key/value text."""
    lines = ["# cbflink linkage report", f"schema = {report.schema}", ""]

    def section(name: str, mapping: dict | None, comment: str | None = None):
        lines.append(f"[{name}]")
        if comment:
            lines.append(f"# {comment}")
        if mapping is None:
            lines.append("available = false")
        else:
            for key, value in mapping.items():
                lines.append(f"{key} = {_format_value(value)}")
        lines.append("")

    section("config", report.config)
    section("counts", report.counts)

    lines.append("[matches]")
    lines.append(f"count = {len(report.matches)}")
    lines.append("# members | similarity")
    for members, similarity in report.matches:
        lines.append(f"{members} | {repr(similarity)}")
    lines.append("")

    lines.append("[traffic]")
    for key in ("total_bytes", "total_messages", "vector_value_bytes"):
        lines.append(f"{key} = {report.traffic[key]}")
    lines.append("# channel | messages | bytes")
    for channel, entry in report.traffic["channels"].items():
        lines.append(f"{channel} | {entry['messages']} | {entry['bytes']}")
    lines.append("")

    section("timings", report.timings, comment="seconds; not reproducible across runs")
    section("quality", report.quality)
    section("privacy", report.privacy)
    section("flags", report.flags)

    Path(path).write_text("\n".join(lines), encoding="utf-8")


def parse_report(path: str | Path) -> dict:
    """Parse an emitted report back into sections of fields and rows."""
    sections: dict[str, dict] = {}
    schema = None
    current: dict | None = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = {"fields": {}, "rows": []}
            sections[line[1:-1]] = current
            continue
        if current is None:
            if line.startswith("schema"):
                schema = line.split("=", 1)[1].strip()
            continue
        if " | " in line:
            current["rows"].append([_parse_value(x.strip()) for x in line.split(" | ")])
        elif "=" in line:
            key, value = line.split("=", 1)
            current["fields"][key.strip()] = _parse_value(value.strip())
    if schema != REPORT_SCHEMA:
        raise ValueError(f"unsupported report schema {schema!r}")
    return {"schema": schema, "sections": sections}


# -- config files and sweeps ---------------------------------------------------

_TUPLE_FIELDS = {"dataset_paths", "blocking_attrs", "qid_attrs"}


def config_from_mapping(values: dict[str, str], base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Typed ExperimentConfig from string key/value pairs (file or flags)."""
    base = base or ExperimentConfig()
    kwargs = {}
    by_name = {f.name: f for f in fields(ExperimentConfig)}
    for key, raw in values.items():
        if key not in by_name:
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(base, key)
        if key in _TUPLE_FIELDS:
            kwargs[key] = tuple(x.strip() for x in raw.split(",") if x.strip())
        elif isinstance(current, bool):
            if raw.lower() not in ("true", "false"):
                raise ValueError(f"{key}: expected true/false, got {raw!r}")
            kwargs[key] = raw.lower() == "true"
        elif isinstance(current, int):
            kwargs[key] = int(raw, 0)
        elif isinstance(current, float):
            kwargs[key] = float(raw)
        else:
            kwargs[key] = raw
    return replace(base, **kwargs)


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Key/value config file plus flag overrides; flags win."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {line_no}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    config = config_from_mapping(values)
    if overrides:
        config = config_from_mapping(overrides, base=config)
    return config


def sweep(
    base: ExperimentConfig,
    out_dir: str | Path,
    sizes: Sequence[int] = (),
    parties: Sequence[int] = (),
    patterns: Sequence[str] = (),
    schemes: Sequence[str] = (),
    corruption_rates: Sequence[float] = (),
) -> list[tuple[dict, Path]]:
    """Expand a grid into independent runs with derived seeds.

    Every combination gets its own report file named after the cell; an
    ``index.txt`` maps cells to files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    done: list[tuple[dict, Path]] = []
    index_lines = []
    for n in sizes or (base.gen_size,):
        for p in parties or (base.gen_parties,):
            for pattern in patterns or (base.pattern,):
                for scheme in schemes or (base.scheme,):
                    for rate in corruption_rates or (base.gen_corruption_rate,):
                        cell = {
                            "n": n,
                            "p": p,
                            "pattern": pattern,
                            "scheme": scheme,
                            "corruption": rate,
                        }
                        name = f"n{n}_p{p}_{pattern}_{scheme}_c{int(rate * 100)}"
                        path = out / f"{name}.report.txt"
                        config = replace(
                            base,
                            gen_size=n,
                            gen_parties=p,
                            pattern=pattern,
                            scheme=scheme,
                            gen_corruption_rate=rate,
                            seed=base.seed + zlib.crc32(name.encode()) % 100000,
                            out_path=str(path),
                        )
                        run_experiment(config)
                        done.append((cell, path))
                        index_lines.append(f"{name}\t{path.name}")
    (out / "index.txt").write_text("\n".join(index_lines) + "\n", encoding="utf-8")
    return done
