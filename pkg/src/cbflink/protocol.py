"""Multi-party linkage drivers and their closed-form cost models.

Three communication patterns classify candidate record sets by their
CBF Dice similarity:

* NAI - all-to-all: every cross-party record tuple per block is summed
  around the full party chain and classified at the linkage unit.
* SEQ - parties are grouped into rings processed in sequence; only the
  record sets surviving one ring are extended with the next ring's
  records.  Requires a linkage unit, which re-masks each survivor's
  partial sum before handing it to the next ring.
* RBR - rings first find matches independently (no linkage unit; each
  ring's first party unmasks), then the cross-product of the per-ring
  match lists is confirmed by one summation over all parties.

All patterns run over the simulated network, under any of the three
secure-summation schemes, and produce identical match sets for the same
input; the schemes differ only in cost and collusion resistance.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from hashlib import blake2b
from typing import Sequence

import numpy as np

from .blocking import build_blocks, intersect_blocks
from .encoding import BfParams, ClkEncoder, CountingBloomFilter, Record
from .paillier import PaillierKeypair, paillier_keygen
from .securesum import BSS, HSS, SSS, SCHEMES, RandomMaskVector, SaltKey
from .simnet import (
    LINKAGE_UNIT,
    OWNER,
    BkvSet,
    MatchBroadcast,
    Network,
    PartyActor,
    PublicKeyMessage,
    RingMatchList,
    SaltRegistration,
    VectorBatch,
    run_topology,
)

NAI = "NAI"
SEQ = "SEQ"
RBR = "RBR"
PATTERNS = (NAI, SEQ, RBR)

LU_ID = "LU"


def party_name(index: int) -> str:
    return f"P{index + 1}"


def _derive_seed(seed: int, *tags: object) -> int:
    digest = blake2b(
        repr(tags).encode("utf-8"), digest_size=8, key=seed.to_bytes(8, "big")
    ).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class RingPlan:
    """Partition of the parties into rings, ascending by dataset size."""

    rings: tuple[tuple[int, ...], ...]
    r_m: int

    def __post_init__(self) -> None:
        if any(len(r) < self.r_m for r in self.rings):
            raise ValueError("every ring must have at least r_m members")


def group_rings(party_sizes: Sequence[tuple[int, int]], r_m: int) -> RingPlan:
    """Group parties into ``p // r_m`` rings, smallest datasets first.

    Parties are sorted ascending by dataset size (ties by id), sliced
    into rings of ``r_m``, and the remainder joins the last (largest)
    ring: ten parties give ring sizes [3, 3, 4] at ``r_m = 3`` and
    [4, 6] at ``r_m = 4``.
    """
    if r_m < 2:
        raise ValueError("r_m must be >= 2")
    p = len(party_sizes)
    if p < r_m:
        raise ValueError(f"cannot form a ring of {r_m} from {p} parties")
    order = [pid for pid, _ in sorted(party_sizes, key=lambda t: (t[1], t[0]))]
    n_rings = p // r_m
    sizes = [r_m] * n_rings
    sizes[-1] += p - r_m * n_rings
    rings: list[tuple[int, ...]] = []
    start = 0
    for size in sizes:
        rings.append(tuple(order[start : start + size]))
        start += size
    return RingPlan(tuple(rings), r_m)


def count_candidates(
    pattern: str, n: int, b: int, p: int, r: int | None = None, carried: str = "capped"
) -> int:
    """Closed-form worst-case candidate count on equal-size blocks.

    NAI counts the fully formed sets classified at the linkage unit,
    ``b * (n/b)^p``.  SEQ and RBR count partial-sum formations per hop,
    including the re-mask of every carried survivor, which is what the
    closed-form cost summations add up.

    ``carried`` selects what a ring hands to its successor:

    * ``"capped"`` caps the carried match list at one match per record
      (``b * n/b``), the worst case the closed-form summations assume;
    * ``"all"`` carries every candidate set forward, the exact count a
      run with ``s_t = 0`` produces.

    Formula mode requires ``b | n`` and, for SEQ/RBR, ``r | p``.
    """
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    if carried not in ("capped", "all"):
        raise ValueError("carried must be 'capped' or 'all'")
    if n % b:
        raise ValueError("formula mode needs b to divide n")
    m = n // b
    if pattern == NAI:
        return b * m**p
    if r is None:
        raise ValueError(f"{pattern} needs a ring size r")
    if p % r:
        raise ValueError("formula mode needs r to divide p")
    n_rings = p // r
    first_ring = sum(b * m**i for i in range(1, r + 1))
    if pattern == SEQ:
        if carried == "capped":
            later = sum(b * m**i for i in range(1, r + 2))
            return first_ring + (n_rings - 1) * later
        total = first_ring
        for j in range(2, n_rings + 1):
            carried_sets = b * m ** ((j - 1) * r)
            total += carried_sets * sum(m**i for i in range(0, r + 1))
        return total
    # RBR: independent rings, then the cross-product of ring match lists.
    phase1 = n_rings * first_ring
    if carried == "capped":
        phase2 = sum(b * m**i for i in range(1, n_rings + 1))
    else:
        phase2 = sum(b * m ** (j * r) for j in range(1, n_rings + 1))
    return phase1 + phase2


def collusion_combinations(pattern: str, p: int, r: int | None = None) -> int:
    """Maximum number of party combinations that could collude.

    All-to-all summation exposes each party to every other one
    (``p * (p - 1)``); ring grouping confines collusion to ring members
    (``(p / r) * r * (r - 1)`` over equal rings).
    """
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    if pattern == NAI:
        return p * (p - 1)
    if r is None:
        raise ValueError(f"{pattern} needs a ring size r")
    if p % r:
        raise ValueError("equal-ring formula needs r to divide p")
    return (p // r) * r * (r - 1)


@dataclass(frozen=True)
class LinkageConfig:
    """Parameters all parties agree on before a linkage run."""

    params: BfParams = field(default_factory=BfParams)
    s_t: float = 0.8
    pattern: str = SEQ
    scheme: str = SSS
    r_m: int = 2
    blocking_attrs: tuple[int, ...] = (0, 1)
    qid_attrs: tuple[int, ...] | None = None
    seed: int = 42
    seq_dice_denominator: str = "accumulated"  # or "global_p", the literal reading
    per_ring_seeds: bool = False
    paillier_bits: int = 512
    accounting: str = "nominal"
    record_payloads: bool = False

    def __post_init__(self) -> None:
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {self.pattern!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 0.0 <= self.s_t <= 1.0:
            raise ValueError("s_t must be in [0, 1]")
        if self.pattern == RBR and self.r_m < 3:
            raise ValueError("RBR needs r_m >= 3 (no linkage unit to hold masks)")
        if self.r_m < 2:
            raise ValueError("r_m must be >= 2")
        if self.seq_dice_denominator not in ("accumulated", "global_p"):
            raise ValueError("seq_dice_denominator must be 'accumulated' or 'global_p'")
        if self.per_ring_seeds and self.pattern != RBR:
            raise ValueError(
                "per-ring encodings are only sound for RBR phase 1; SEQ carries "
                "partial sums across rings and needs one shared encoding"
            )


@dataclass(frozen=True)
class CandidateSet:
    """A classified record tuple with its unmasked CBF."""

    member_records: tuple[tuple[int, int], ...]
    cbf: CountingBloomFilter
    contributors: int


@dataclass(frozen=True)
class MatchResult:
    """A record set classified as a match, one record per involved party."""

    member_records: tuple[tuple[int, int], ...]
    similarity: float


@dataclass
class _Batch:
    """One block's candidate accumulators while they travel the chain.

    ``acc`` is an (n, l) int64 matrix for BSS/SSS or a list of ciphertext
    lists for HSS; ``members`` holds each row's record index per chain
    party; ``roots`` names each row's mask lineage.
    """

    acc: object
    members: np.ndarray
    roots: np.ndarray
    hop_count: int = 0

    @property
    def count(self) -> int:
        return len(self.acc)


class LinkageRun:
    """One end-to-end linkage over the simulated network.

    After :meth:`execute` the run holds everything a report needs: the
    match list, observed candidate counters, the network's traffic
    ledger, per-step timings and the unmasked CBFs of the matched sets.
    """

    def __init__(
        self,
        databases: Sequence[Sequence[Record]],
        config: LinkageConfig,
        network: Network | None = None,
        ring_order: Sequence[int] | None = None,
    ):
        if len(databases) < 2:
            raise ValueError("linkage needs at least two databases")
        self.databases = [list(db) for db in databases]
        self.config = config
        self.p = len(databases)
        self.l = config.params.l
        self.network = network or Network(
            accounting=config.accounting, record_payloads=config.record_payloads
        )
        self.ring_order = list(ring_order) if ring_order is not None else None
        self.mask_seed = _derive_seed(config.seed, "mask")
        self.run_id = _derive_seed(config.seed, "run") % 2**31
        self._hss_rng = random.Random(_derive_seed(config.seed, "hss-rng"))
        self._phase = "phase1"
        self._current_keypair: PaillierKeypair | None = None
        self._stage_count = 0

        self.matches: list[MatchResult] = []
        self.matched_candidates: list[CandidateSet] = []
        self.counters = {
            "classified": 0,
            "formations": 0,
            "stage_formations": [],
            "phase2_combos": 0,
        }
        self.timings: dict[str, float] = {}
        self.common_blocks: list[str] = []
        self.plan: RingPlan | None = None

        self.owners = [
            self.network.register(PartyActor(party_name(i), OWNER))
            for i in range(self.p)
        ]
        self.lu = (
            self.network.register(PartyActor(LU_ID, LINKAGE_UNIT))
            if config.pattern in (NAI, SEQ)
            else None
        )

    # -- setup --------------------------------------------------------------

    def _coordinator(self) -> PartyActor:
        if self.lu is not None:
            return self.lu
        assert self.plan is not None
        return self.owners[self.plan.rings[0][0]]

    def _setup_plan(self) -> None:
        if self.config.pattern in (SEQ, RBR):
            sizes = [(i, len(db)) for i, db in enumerate(self.databases)]
            self.plan = group_rings(sizes, self.config.r_m)

    def _setup_blocks(self) -> None:
        t0 = time.perf_counter()
        for actor, db in zip(self.owners, self.databases):
            actor.records = db
            actor.blocks = build_blocks(db, self.config.blocking_attrs)
        self.timings["blocking"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        net = self.network
        coord = self._coordinator()
        key_sets: list[dict] = []
        for actor in self.owners:
            if actor is coord:
                key_sets.append(actor.blocks)
                continue
            net.send(actor.id, coord.id, "bkv_set", BkvSet(actor.id, tuple(sorted(actor.blocks))))
            key_sets.append(dict.fromkeys(net.recv(coord.id, actor.id).payload.keys))
        self.common_blocks = sorted(intersect_blocks(key_sets))
        for actor in self.owners:
            if actor is coord:
                continue
            net.send(coord.id, actor.id, "bkv_common", BkvSet(coord.id, tuple(self.common_blocks)))
            net.recv(actor.id, coord.id)
        self.timings["bkv_exchange"] = time.perf_counter() - t0

    def _ring_params(self, ring_index: int) -> BfParams:
        base = self.config.params
        return replace(
            base,
            hash_seed_a=_derive_seed(base.hash_seed_a, "ring", ring_index) % 2**64,
            hash_seed_b=_derive_seed(base.hash_seed_b, "ring", ring_index) % 2**64,
        )

    def _project(self, record: Record) -> Record:
        attrs = self.config.qid_attrs
        if attrs is None:
            return record
        return Record(record.entity_id, tuple(record.qid_values[a] for a in attrs))

    def _setup_encodings(self) -> None:
        t0 = time.perf_counter()
        encoder = ClkEncoder(self.config.params)
        for actor, db in zip(self.owners, self.databases):
            actor.bf_matrix = encoder.encode_all([self._project(r) for r in db])
            actor.bf_phase1 = actor.bf_matrix
        if self.config.per_ring_seeds and self.plan is not None:
            for ring_index, ring in enumerate(self.plan.rings):
                ring_encoder = ClkEncoder(self._ring_params(ring_index))
                for idx in ring:
                    self.owners[idx].bf_phase1 = ring_encoder.encode_all(
                        [self._project(r) for r in self.databases[idx]]
                    )
        self.timings["encoding"] = time.perf_counter() - t0

    def _register_salt(self, party_index: int, receiver_id: str) -> None:
        actor = self.owners[party_index]
        self.network.send(
            actor.id,
            receiver_id,
            "salt_reg",
            SaltRegistration(actor.id, self.run_id, actor.salt.key),
        )
        self.network.recv(receiver_id, actor.id)

    def _send_public_key(self, sender_id: str, receiver_id: str, n: int) -> None:
        self.network.send(sender_id, receiver_id, "public_key", PublicKeyMessage(n))
        self.network.recv(receiver_id, sender_id)

    def _setup_scheme(self) -> None:
        cfg = self.config
        if cfg.scheme == SSS:
            for i, actor in enumerate(self.owners):
                rng = random.Random(_derive_seed(cfg.seed, "salt", i))
                actor.salt = SaltKey.generate(rng)
            if cfg.pattern in (NAI, SEQ):
                for i in range(self.p):
                    self._register_salt(i, LU_ID)
            else:
                assert self.plan is not None
                lead_all = self.plan.rings[0][0]
                for ring in self.plan.rings:
                    for idx in ring[1:]:
                        self._register_salt(idx, party_name(ring[0]))
                for idx in range(self.p):
                    if idx != lead_all:
                        self._register_salt(idx, party_name(lead_all))
        elif cfg.scheme == HSS:
            if cfg.pattern in (NAI, SEQ):
                self.lu.keypair = paillier_keygen(
                    cfg.paillier_bits, _derive_seed(cfg.seed, "paillier")
                )
                for actor in self.owners:
                    self._send_public_key(LU_ID, actor.id, self.lu.keypair.public.n)
            else:
                assert self.plan is not None
                for ring_index, ring in enumerate(self.plan.rings):
                    lead = self.owners[ring[0]]
                    lead.keypair = paillier_keygen(
                        cfg.paillier_bits, _derive_seed(cfg.seed, "paillier", ring_index)
                    )
                    for idx in ring[1:]:
                        self._send_public_key(lead.id, party_name(idx), lead.keypair.public.n)
                lead_all = self.owners[self.plan.rings[0][0]]
                lead_all.keypair_phase2 = paillier_keygen(
                    cfg.paillier_bits, _derive_seed(cfg.seed, "paillier", "phase2")
                )
                for idx in range(self.p):
                    if self.owners[idx] is not lead_all:
                        self._send_public_key(
                            lead_all.id, party_name(idx), lead_all.keypair_phase2.public.n
                        )

    # -- masked accumulator mechanics ----------------------------------------

    def _mask_matrix(self, scope: object, n_roots: int) -> np.ndarray:
        rows = [
            RandomMaskVector.generate(self.mask_seed, (scope, i), self.l).values
            for i in range(n_roots)
        ]
        if not rows:
            return np.zeros((0, self.l), dtype=np.int64)
        return np.stack(rows)

    def _start_batch(
        self,
        scope: object,
        n_rows: int,
        base_counts: np.ndarray | None,
        keypair: PaillierKeypair | None,
    ) -> _Batch:
        """Receiver-side round start: masked (or encrypted) lineage rows."""
        roots = np.arange(n_rows, dtype=np.int64)
        members = np.zeros((n_rows, 0), dtype=np.int64)
        if self.config.scheme in (BSS, SSS):
            acc = self._mask_matrix(scope, n_rows)
            if base_counts is not None:
                acc = acc + base_counts
            return _Batch(acc, members, roots)
        rng = self._hss_rng
        public = keypair.public
        if base_counts is None:
            acc = [[public.encrypt(0, rng) for _ in range(self.l)] for _ in range(n_rows)]
        else:
            acc = [[public.encrypt(int(c), rng) for c in row] for row in base_counts]
        return _Batch(acc, members, roots)

    def _extend(
        self,
        batch: _Batch,
        party_index: int,
        rec_ids: np.ndarray | None,
        bf_rows: np.ndarray,
        mode: str,
        keypair: PaillierKeypair | None,
        count_formations: bool,
        member_column: int | None = None,
    ) -> _Batch:
        """One party's hop: add its bits to every candidate accumulator.

        ``aligned`` pairs row i with record i (round start at the first
        chain party), ``cross`` extends every row with every record, and
        ``gather`` adds the record already named in each row's members.
        """
        scheme = self.config.scheme
        salt_vec = (
            self.owners[party_index].salt.vector(self.l) if scheme == SSS else None
        )

        if mode == "aligned":
            if batch.count != len(rec_ids):
                raise ValueError("aligned hop needs one accumulator per record")
            members = np.concatenate([batch.members, rec_ids[:, None]], axis=1)
            roots = batch.roots
            if scheme in (BSS, SSS):
                acc = batch.acc + bf_rows
            else:
                acc = [
                    self._hss_row_add(row, bits, keypair)
                    for row, bits in zip(batch.acc, bf_rows)
                ]
        elif mode == "cross":
            n, m = batch.count, len(rec_ids)
            members = np.concatenate(
                [np.repeat(batch.members, m, axis=0), np.tile(rec_ids, n)[:, None]],
                axis=1,
            )
            roots = np.repeat(batch.roots, m)
            if scheme in (BSS, SSS):
                acc = (batch.acc[:, None, :] + bf_rows[None, :, :]).reshape(n * m, self.l)
            else:
                acc = [
                    self._hss_row_add(row, bits, keypair)
                    for row in batch.acc
                    for bits in bf_rows
                ]
        elif mode == "gather":
            picked = bf_rows[batch.members[:, member_column]]
            members = batch.members
            roots = batch.roots
            if scheme in (BSS, SSS):
                acc = batch.acc + picked
            else:
                acc = [
                    self._hss_row_add(row, bits, keypair)
                    for row, bits in zip(batch.acc, picked)
                ]
        else:
            raise ValueError(f"unknown extension mode {mode!r}")

        if scheme == SSS and len(acc):
            acc = acc + salt_vec
        if count_formations:
            self.counters["formations"] += len(acc)
            self._stage_count += len(acc)
        return _Batch(acc, members, roots, batch.hop_count + 1)

    def _hss_row_add(self, row, bits, keypair: PaillierKeypair) -> list[int]:
        public = keypair.public
        rng = self._hss_rng
        return [public.add(c, public.encrypt(int(bit), rng)) for c, bit in zip(row, bits)]

    def _unmask(
        self,
        batch: _Batch,
        scope: object,
        n_roots: int,
        salt_parties: Sequence[int],
        contributors: int,
        keypair: PaillierKeypair | None,
    ) -> np.ndarray:
        """Strip masks and salts (or decrypt) and range-check the counts."""
        if self.config.scheme in (BSS, SSS):
            counts = batch.acc - self._mask_matrix(scope, n_roots)[batch.roots]
            if self.config.scheme == SSS:
                for idx in salt_parties:
                    counts = counts - self.owners[idx].salt.vector(self.l)
        else:
            counts = np.array(
                [[keypair.decrypt(c) for c in row] for row in batch.acc], dtype=np.int64
            ).reshape(batch.count, self.l)
        if counts.size and (counts.min() < 0 or counts.max() > contributors):
            raise ValueError(
                "unmasked counts outside [0, %d]: protocol violation, wrong "
                "mask or missing salt" % contributors
            )
        return counts

    @staticmethod
    def _dice(counts: np.ndarray, denominator_count: int) -> np.ndarray:
        z = (counts == denominator_count).sum(axis=1)
        totals = counts.sum(axis=1)
        dice = np.zeros(len(counts), dtype=np.float64)
        nonzero = totals > 0
        dice[nonzero] = denominator_count * z[nonzero] / totals[nonzero]
        return dice

    # -- chain execution ------------------------------------------------------

    def _run_chain(
        self,
        chain: Sequence[int],
        receiver_id: str,
        batch: _Batch,
        first_mode: str,
        rest_mode: str,
        block_recs: dict[int, np.ndarray] | None,
        keypair: PaillierKeypair | None,
        count_formations: bool,
    ) -> _Batch:
        """Send the start batch around the chain and back to the receiver."""
        net = self.network
        parties = tuple(chain)
        first = party_name(chain[0])
        if receiver_id != first:
            net.send(receiver_id, first, "mask_batch", self._to_wire(batch, parties))
            batch = self._from_wire(net.recv(first, receiver_id).payload)
        for position, party_index in enumerate(chain):
            mode = first_mode if position == 0 else rest_mode
            source = (
                self.owners[party_index].bf_matrix
                if self._phase == "phase2"
                else self.owners[party_index].bf_phase1
            )
            if mode == "gather":
                rec_ids, rows = None, source
            else:
                rec_ids = block_recs[party_index]
                rows = source[rec_ids]
            batch = self._extend(
                batch,
                party_index,
                rec_ids,
                rows,
                mode,
                keypair,
                count_formations,
                member_column=position if mode == "gather" else None,
            )
            sender = party_name(party_index)
            nxt = receiver_id if position == len(chain) - 1 else party_name(chain[position + 1])
            net.send(sender, nxt, "sum_batch", self._to_wire(batch, parties))
            batch = self._from_wire(net.recv(nxt, sender).payload)
        return batch

    def _to_wire(self, batch: _Batch, parties: tuple[int, ...]) -> VectorBatch:
        cipher_bytes = None
        if self.config.scheme == HSS:
            public = self._current_keypair.public
            cipher_bytes = (public.nsquare.bit_length() + 7) // 8
        return VectorBatch(
            scheme=self.config.scheme,
            length=self.l,
            vectors=batch.acc,
            members=batch.members,
            parties=parties,
            roots=batch.roots,
            hop_count=batch.hop_count,
            cipher_bytes=cipher_bytes,
        )

    @staticmethod
    def _from_wire(wire: VectorBatch) -> _Batch:
        return _Batch(wire.vectors, wire.members, wire.roots, wire.hop_count)

    # -- pattern drivers --------------------------------------------------------

    def execute(self) -> list[MatchResult]:
        return run_topology(self.network, self._drive)

    def _drive(self, net: Network) -> list[MatchResult]:
        t0 = time.perf_counter()
        self._setup_plan()
        self._setup_blocks()
        self._setup_encodings()
        self._setup_scheme()
        t1 = time.perf_counter()
        if self.config.pattern == NAI:
            self._drive_nai()
        elif self.config.pattern == SEQ:
            self._drive_seq()
        else:
            self._drive_rbr()
        self.timings["matching"] = time.perf_counter() - t1
        self._broadcast_matches()
        self.timings["total"] = time.perf_counter() - t0
        self.matches.sort(key=lambda m: m.member_records)
        self.matched_candidates.sort(key=lambda c: c.member_records)
        return self.matches

    def _block_records(self, block: str) -> dict[int, np.ndarray]:
        return {
            i: np.asarray(self.owners[i].blocks[block], dtype=np.int64)
            for i in range(self.p)
        }

    def _collect_matches(
        self,
        chain: Sequence[int],
        batch: _Batch,
        counts: np.ndarray,
        dice: np.ndarray,
        contributors: int,
    ) -> None:
        for i in np.flatnonzero(dice >= self.config.s_t):
            members = tuple(
                sorted((chain[j], int(batch.members[i, j])) for j in range(len(chain)))
            )
            self.matches.append(MatchResult(members, float(dice[i])))
            self.matched_candidates.append(
                CandidateSet(
                    members,
                    CountingBloomFilter(counts[i].copy(), contributors),
                    contributors,
                )
            )

    def _drive_nai(self) -> None:
        chain = list(range(self.p))
        keypair = self.lu.keypair if self.config.scheme == HSS else None
        self._current_keypair = keypair
        for block in self.common_blocks:
            block_recs = self._block_records(block)
            scope = ("nai", block)
            n_roots = len(block_recs[chain[0]])
            batch = self._start_batch(scope, n_roots, None, keypair)
            batch = self._run_chain(
                chain, LU_ID, batch, "aligned", "cross", block_recs, keypair, True
            )
            counts = self._unmask(batch, scope, n_roots, chain, self.p, keypair)
            self.counters["classified"] += batch.count
            dice = self._dice(counts, self.p)
            self._collect_matches(chain, batch, counts, dice, self.p)

    def _drive_seq(self) -> None:
        assert self.plan is not None
        keypair = self.lu.keypair if self.config.scheme == HSS else None
        self._current_keypair = keypair
        # Per block: surviving members, their plain counts, parties so far.
        carried: dict[str, tuple[np.ndarray | None, np.ndarray | None, list[int]]] = {
            block: (None, None, []) for block in self.common_blocks
        }
        last_ring = len(self.plan.rings) - 1
        for ring_index, ring in enumerate(self.plan.rings):
            self._stage_count = 0
            for block in self.common_blocks:
                members_in, counts_in, chain_before = carried[block]
                if members_in is not None and len(members_in) == 0:
                    continue  # block ran dry in an earlier ring
                block_recs = self._block_records(block)
                scope = ("seq", ring_index, block)
                if members_in is None:
                    n_roots = len(block_recs[ring[0]])
                    batch = self._start_batch(scope, n_roots, None, keypair)
                    first_mode = "aligned"
                else:
                    n_roots = len(members_in)
                    batch = self._start_batch(scope, n_roots, counts_in, keypair)
                    batch.members = members_in
                    # Re-masking each survivor counts as one formation.
                    self.counters["formations"] += n_roots
                    self._stage_count += n_roots
                    first_mode = "cross"
                batch = self._run_chain(
                    list(ring), LU_ID, batch, first_mode, "cross", block_recs, keypair, True
                )
                contributors = len(chain_before) + len(ring)
                counts = self._unmask(batch, scope, n_roots, ring, contributors, keypair)
                self.counters["classified"] += batch.count
                denom = (
                    self.p
                    if self.config.seq_dice_denominator == "global_p"
                    else contributors
                )
                dice = self._dice(counts, denom)
                keep = dice >= self.config.s_t
                chain_now = chain_before + list(ring)
                if ring_index == last_ring:
                    self._collect_matches(chain_now, batch, counts, dice, contributors)
                carried[block] = (batch.members[keep], counts[keep], chain_now)
            self.counters["stage_formations"].append(self._stage_count)

    def _drive_rbr(self) -> None:
        assert self.plan is not None
        rings = self.plan.rings
        order = self.ring_order if self.ring_order is not None else list(range(len(rings)))
        ring_matches: dict[int, dict[str, np.ndarray]] = {}
        stage_counts: dict[int, int] = {}

        # Phase 1: every ring finds its own matches; its first party holds
        # the masks and unmasks, so no linkage unit is involved.
        for ring_index in order:
            ring = rings[ring_index]
            self._stage_count = 0
            lead = party_name(ring[0])
            keypair = self.owners[ring[0]].keypair if self.config.scheme == HSS else None
            self._current_keypair = keypair
            per_block: dict[str, np.ndarray] = {}
            for block in self.common_blocks:
                block_recs = self._block_records(block)
                scope = ("rbr1", ring_index, block)
                n_roots = len(block_recs[ring[0]])
                batch = self._start_batch(scope, n_roots, None, keypair)
                batch = self._run_chain(
                    list(ring), lead, batch, "aligned", "cross", block_recs, keypair, True
                )
                counts = self._unmask(batch, scope, n_roots, ring, len(ring), keypair)
                self.counters["classified"] += batch.count
                dice = self._dice(counts, len(ring))
                per_block[block] = batch.members[dice >= self.config.s_t]
            ring_matches[ring_index] = per_block
            stage_counts[ring_index] = self._stage_count
        self.counters["stage_formations"].extend(
            stage_counts[i] for i in range(len(rings))
        )

        # Phase 2: ring leads ship their match lists to the first ring's
        # lead, which confirms the cross-product over all p parties using
        # the shared (phase-2) encoding.
        self._phase = "phase2"
        lead_all_idx = rings[0][0]
        lead_all = party_name(lead_all_idx)
        net = self.network
        for ring_index, ring in enumerate(rings):
            if ring[0] == lead_all_idx:
                continue
            payload = RingMatchList(
                ring_index,
                tuple(
                    tuple((ring[j], int(row[j])) for j in range(len(ring)))
                    for block in self.common_blocks
                    for row in ring_matches[ring_index][block]
                ),
            )
            net.send(party_name(ring[0]), lead_all, "ring_matches", payload)
            net.recv(lead_all, party_name(ring[0]))

        keypair = (
            self.owners[lead_all_idx].keypair_phase2
            if self.config.scheme == HSS
            else None
        )
        self._current_keypair = keypair
        chain = [idx for ring in rings for idx in ring]
        for block in self.common_blocks:
            combos = ring_matches[0][block]
            self.counters["phase2_combos"] += len(combos)
            for ring_index in range(1, len(rings)):
                nxt = ring_matches[ring_index][block]
                if len(combos) and len(nxt):
                    combos = np.concatenate(
                        [np.repeat(combos, len(nxt), axis=0), np.tile(nxt, (len(combos), 1))],
                        axis=1,
                    )
                else:
                    combos = np.zeros(
                        (0, combos.shape[1] + nxt.shape[1]), dtype=np.int64
                    )
                self.counters["phase2_combos"] += len(combos)
            if len(combos) == 0:
                continue
            scope = ("rbr2", block)
            batch = self._start_batch(scope, len(combos), None, keypair)
            batch.members = combos
            batch = self._run_chain(
                chain, lead_all, batch, "gather", "gather", None, keypair, False
            )
            counts = self._unmask(batch, scope, len(combos), chain, self.p, keypair)
            self.counters["classified"] += batch.count
            dice = self._dice(counts, self.p)
            self._collect_matches(chain, batch, counts, dice, self.p)

    def _broadcast_matches(self) -> None:
        receiver = self._coordinator()
        payload = MatchBroadcast(
            tuple((m.member_records, m.similarity) for m in self.matches)
        )
        for actor in self.owners:
            if actor is receiver:
                continue
            self.network.send(receiver.id, actor.id, "match_broadcast", payload)
            self.network.recv(actor.id, receiver.id)

    # -- results ------------------------------------------------------------

    def observed_candidates(self) -> int:
        """Pattern-specific candidate count, comparable to the closed forms."""
        if self.config.pattern == NAI:
            return self.counters["classified"]
        if self.config.pattern == SEQ:
            return self.counters["formations"]
        return self.counters["formations"] + self.counters["phase2_combos"]


def run_nai(databases: Sequence[Sequence[Record]], config: LinkageConfig) -> list[MatchResult]:
    """All-to-all linkage; every cross-party tuple per block is classified."""
    return LinkageRun(databases, replace(config, pattern=NAI)).execute()


def run_seq(databases: Sequence[Sequence[Record]], config: LinkageConfig) -> list[MatchResult]:
    """Sequential ring pipeline through the linkage unit."""
    return LinkageRun(databases, replace(config, pattern=SEQ)).execute()


def run_rbr(
    databases: Sequence[Sequence[Record]],
    config: LinkageConfig,
    ring_order: Sequence[int] | None = None,
) -> list[MatchResult]:
    """Ring-by-ring linkage without a linkage unit."""
    return LinkageRun(
        databases, replace(config, pattern=RBR), ring_order=ring_order
    ).execute()
