"""Simulated multi-party message-passing network.

Parties and the linkage unit are in-process actors joined by FIFO,
lossless channels.  Every send is priced under the active accounting
mode and recorded in a traffic ledger, which makes communication-size
comparisons exact and reproducible; a single-threaded schedule is the
reference for report equality.

Accounting modes:

* ``nominal`` - masked-sum positions cost 2 bytes, encrypted positions 4
  bytes: the short-integer/long-integer convention communication sizes
  are usually quoted in.  Identifier metadata rides free.
* ``actual`` - positions are priced at honest fixed widths (4 bytes for
  plain sums, the real ciphertext width for encrypted ones) and member
  identifiers are counted too.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .securesum import BSS, HSS, SSS, NOMINAL_BYTES_ENCRYPTED, NOMINAL_BYTES_PLAIN

MESSAGE_HEADER_BYTES = 8
# Per serialized vector: scheme tag (1) + hop count (2) + length (4).
VECTOR_HEADER_BYTES = 7
MEMBER_ID_BYTES = 4
SIMILARITY_BYTES = 8

OWNER = "owner"
LINKAGE_UNIT = "linkage_unit"


class DeadlockError(RuntimeError):
    """An actor tried to receive a message that was never sent."""


@dataclass
class VectorBatch:
    """One hop's worth of masked accumulators for one block.

    ``vectors`` is an ``(n, l)`` int64 matrix for BSS/SSS or a list of
    ciphertext tuples for HSS.  ``members`` maps each row to the record
    index it holds per chain party; ``roots`` names each row's lineage so
    the receiver can look up the matching start mask.
    """

    scheme: str
    length: int
    vectors: Any
    members: np.ndarray
    parties: tuple[int, ...]
    roots: np.ndarray
    hop_count: int = 0
    cipher_bytes: int | None = None

    @property
    def count(self) -> int:
        return len(self.vectors)


@dataclass
class SaltRegistration:
    party: str
    run_id: int
    key: int


@dataclass
class PublicKeyMessage:
    n: int


@dataclass
class BkvSet:
    party: str
    keys: tuple[str, ...]


@dataclass
class MatchBroadcast:
    matches: tuple[tuple[tuple[tuple[int, int], ...], float], ...]


@dataclass
class RingMatchList:
    ring_index: int
    members: tuple[tuple[tuple[int, int], ...], ...]


@dataclass
class Message:
    kind: str
    sender: str
    receiver: str
    payload: Any
    nbytes: int
    step: int


class Channel:
    """Ordered, lossless, duplication-free link between two actors."""

    def __init__(self, sender: str, receiver: str):
        self.sender = sender
        self.receiver = receiver
        self.queue: deque[Message] = deque()
        self.bytes_sent = 0
        self.messages_sent = 0
        self.open = True


@dataclass
class TrafficLedger:
    """Byte and message counts, total and per channel."""

    per_channel: dict[tuple[str, str], dict[str, int]] = field(default_factory=dict)
    total_bytes: int = 0
    total_messages: int = 0
    # Value bytes cover serialized vector positions only (no headers, no
    # identifiers): the quantity the per-position width ratios apply to.
    vector_value_bytes: int = 0

    def record(self, frm: str, to: str, nbytes: int, value_bytes: int) -> None:
        entry = self.per_channel.setdefault((frm, to), {"messages": 0, "bytes": 0})
        entry["messages"] += 1
        entry["bytes"] += nbytes
        self.total_bytes += nbytes
        self.total_messages += 1
        self.vector_value_bytes += value_bytes

    def snapshot(self) -> dict:
        return {
            "total_bytes": self.total_bytes,
            "total_messages": self.total_messages,
            "vector_value_bytes": self.vector_value_bytes,
            "channels": {
                f"{frm}->{to}": dict(entry)
                for (frm, to), entry in sorted(self.per_channel.items())
            },
        }


class PartyActor:
    """One participant: a database owner or the linkage unit.

    Owns its records, encodings, blocks and scheme state (salt key,
    Paillier keys) exclusively; other actors see only channel messages.
    """

    def __init__(self, actor_id: str, role: str = OWNER):
        self.id = actor_id
        self.role = role
        self.records: Sequence = ()
        self.bf_matrix: np.ndarray | None = None
        self.bf_phase1: np.ndarray | None = None
        self.blocks: dict[str, list[int]] = {}
        self.salt = None
        self.keypair = None
        self.keypair_phase2 = None
        self.received: list[Message] = []


def _plain_width(mode: str) -> int:
    return NOMINAL_BYTES_PLAIN if mode == "nominal" else 4


def _batch_nbytes(batch: VectorBatch, mode: str) -> tuple[int, int]:
    """(total message bytes, vector value bytes) for a batch message."""
    if batch.scheme in (BSS, SSS):
        width = _plain_width(mode)
    elif batch.scheme == HSS:
        if mode == "nominal":
            width = NOMINAL_BYTES_ENCRYPTED
        else:
            if batch.cipher_bytes is None:
                raise ValueError("HSS batch under actual accounting needs cipher_bytes")
            width = batch.cipher_bytes
    else:
        raise ValueError(f"unknown scheme {batch.scheme!r}")
    value_bytes = batch.count * batch.length * width
    nbytes = MESSAGE_HEADER_BYTES + batch.count * VECTOR_HEADER_BYTES + value_bytes
    if mode == "actual":
        depth = batch.members.shape[1] if batch.members.size else 0
        nbytes += batch.count * (depth + 1) * MEMBER_ID_BYTES  # members + root
    return nbytes, value_bytes


def _payload_nbytes(payload: Any, mode: str) -> tuple[int, int]:
    if payload is None:
        return MESSAGE_HEADER_BYTES, 0
    if isinstance(payload, VectorBatch):
        return _batch_nbytes(payload, mode)
    if isinstance(payload, SaltRegistration):
        return MESSAGE_HEADER_BYTES + 16, 0
    if isinstance(payload, PublicKeyMessage):
        return MESSAGE_HEADER_BYTES + (payload.n.bit_length() + 7) // 8, 0
    if isinstance(payload, BkvSet):
        return MESSAGE_HEADER_BYTES + sum(len(k.encode()) for k in payload.keys), 0
    if isinstance(payload, MatchBroadcast):
        body = sum(
            len(members) * MEMBER_ID_BYTES + SIMILARITY_BYTES
            for members, _ in payload.matches
        )
        return MESSAGE_HEADER_BYTES + body, 0
    if isinstance(payload, RingMatchList):
        body = sum(len(members) * MEMBER_ID_BYTES for members in payload.members)
        return MESSAGE_HEADER_BYTES + body, 0
    raise TypeError(f"no wire size defined for payload {type(payload).__name__}")


class Network:
    """Actor registry, channels, ledger and optional trace capture."""

    def __init__(
        self,
        accounting: str = "nominal",
        record_payloads: bool = False,
        keep_trace: bool = True,
    ):
        if accounting not in ("nominal", "actual"):
            raise ValueError("accounting must be 'nominal' or 'actual'")
        self.accounting = accounting
        self.record_payloads = record_payloads
        self.keep_trace = keep_trace
        self.actors: dict[str, PartyActor] = {}
        self.channels: dict[tuple[str, str], Channel] = {}
        self.ledger = TrafficLedger()
        self.trace: list[tuple[int, str, str, str, int]] = []
        self.step = 0

    def register(self, actor: PartyActor) -> PartyActor:
        if actor.id in self.actors:
            raise ValueError(f"actor {actor.id!r} already registered")
        self.actors[actor.id] = actor
        return actor

    def channel(self, frm: str, to: str) -> Channel:
        for name in (frm, to):
            if name not in self.actors:
                raise ValueError(f"unknown actor {name!r}")
        key = (frm, to)
        if key not in self.channels:
            self.channels[key] = Channel(frm, to)
        return self.channels[key]

    def close(self, frm: str, to: str) -> None:
        self.channel(frm, to).open = False

    def send(self, frm: str, to: str, kind: str, payload: Any = None) -> Message:
        """Enqueue a message and charge its serialized size to the ledger."""
        channel = self.channel(frm, to)
        if not channel.open:
            raise ValueError(f"channel {frm}->{to} is closed")
        nbytes, value_bytes = _payload_nbytes(payload, self.accounting)
        self.step += 1
        message = Message(kind, frm, to, payload, nbytes, self.step)
        channel.queue.append(message)
        channel.bytes_sent += nbytes
        channel.messages_sent += 1
        self.ledger.record(frm, to, nbytes, value_bytes)
        if self.keep_trace:
            self.trace.append((self.step, frm, to, kind, nbytes))
        return message

    def recv(self, to: str, frm: str) -> Message:
        """Pop the next message on frm->to; empty channel means deadlock."""
        channel = self.channel(frm, to)
        if not channel.queue:
            raise DeadlockError(
                f"actor {to!r} waiting on {frm!r} at step {self.step}: "
                "no message in channel"
            )
        message = channel.queue.popleft()
        if self.record_payloads:
            self.actors[to].received.append(message)
        return message

    def dump_trace(self, path) -> None:
        """Line-delimited trace: step, from, to, message kind, bytes."""
        with open(path, "w", encoding="utf-8") as fh:
            for step, frm, to, kind, nbytes in self.trace:
                fh.write(f"{step}\t{frm}\t{to}\t{kind}\t{nbytes}\n")


def run_topology(network: Network, driver: Callable[[Network], Any]):
    """Run a driver's message schedule to completion on a checked network.

    Requires at least two registered owner actors (secure summation is
    undefined below that); deadlocks surface as :class:`DeadlockError`
    naming the waiting actor and step.
    """
    owners = [a for a in network.actors.values() if a.role == OWNER]
    if len(owners) < 2:
        raise ValueError("topology needs at least two database-owner actors")
    return driver(network)
