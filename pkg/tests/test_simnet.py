"""Network simulation: accounting, ordering, deadlocks, traces."""

import numpy as np
import pytest

from cbflink.encoding import BfParams, Record
from cbflink.protocol import LinkageConfig, LinkageRun
from cbflink.simnet import (
    MEMBER_ID_BYTES,
    MESSAGE_HEADER_BYTES,
    VECTOR_HEADER_BYTES,
    DeadlockError,
    Network,
    PartyActor,
    VectorBatch,
    run_topology,
)


def plain_batch(count: int, length: int, scheme: str = "BSS", depth: int = 0) -> VectorBatch:
    return VectorBatch(
        scheme=scheme,
        length=length,
        vectors=np.zeros((count, length), dtype=np.int64),
        members=np.zeros((count, depth), dtype=np.int64),
        parties=tuple(range(depth)),
        roots=np.arange(count, dtype=np.int64),
    )


def two_actor_net(**kwargs) -> Network:
    net = Network(**kwargs)
    net.register(PartyActor("P1"))
    net.register(PartyActor("P2"))
    return net


class TestSendAccounting:
    def test_bss_vector_nominal_mode_is_two_bytes_per_position(self):
        net = two_actor_net()
        msg = net.send("P1", "P2", "sum_batch", plain_batch(1, 500))
        assert msg.nbytes == 500 * 2 + MESSAGE_HEADER_BYTES + VECTOR_HEADER_BYTES

    def test_hss_vector_nominal_mode_is_four_bytes_per_position(self):
        net = two_actor_net()
        batch = plain_batch(1, 500, scheme="HSS")
        batch.vectors = [[0] * 500]
        batch.cipher_bytes = 128
        msg = net.send("P1", "P2", "sum_batch", batch)
        assert msg.nbytes == 500 * 4 + MESSAGE_HEADER_BYTES + VECTOR_HEADER_BYTES

    def test_empty_message_costs_header_only(self):
        net = two_actor_net()
        assert net.send("P1", "P2", "ping", None).nbytes == MESSAGE_HEADER_BYTES

    def test_actual_mode_counts_identifiers_and_wider_values(self):
        net = two_actor_net(accounting="actual")
        msg = net.send("P1", "P2", "sum_batch", plain_batch(2, 10, depth=3))
        expected = (
            MESSAGE_HEADER_BYTES
            + 2 * VECTOR_HEADER_BYTES
            + 2 * 10 * 4
            + 2 * (3 + 1) * MEMBER_ID_BYTES
        )
        assert msg.nbytes == expected

    def test_ledger_totals_match_channel_sums(self):
        net = two_actor_net()
        net.send("P1", "P2", "sum_batch", plain_batch(3, 20))
        net.send("P2", "P1", "sum_batch", plain_batch(1, 20))
        snap = net.ledger.snapshot()
        assert snap["total_bytes"] == sum(c["bytes"] for c in snap["channels"].values())
        assert snap["total_messages"] == 2
        assert snap["vector_value_bytes"] == (3 + 1) * 20 * 2


class TestChannelSemantics:
    def test_fifo_order(self):
        net = two_actor_net()
        net.send("P1", "P2", "a", None)
        net.send("P1", "P2", "b", None)
        assert net.recv("P2", "P1").kind == "a"
        assert net.recv("P2", "P1").kind == "b"

    def test_closed_channel_rejects_sends(self):
        net = two_actor_net()
        net.close("P1", "P2")
        with pytest.raises(ValueError, match="closed"):
            net.send("P1", "P2", "a", None)

    def test_deadlock_names_actor_and_step(self):
        net = two_actor_net()
        net.send("P1", "P2", "a", None)
        net.recv("P2", "P1")
        with pytest.raises(DeadlockError, match="'P2' waiting on 'P1' at step 1"):
            net.recv("P2", "P1")

    def test_unknown_actor_rejected(self):
        net = two_actor_net()
        with pytest.raises(ValueError, match="unknown actor"):
            net.send("P1", "P9", "a", None)


class TestRunTopology:
    def test_single_owner_topology_is_an_error(self):
        net = Network()
        net.register(PartyActor("P1"))
        net.register(PartyActor("LU", role="linkage_unit"))
        with pytest.raises(ValueError, match="at least two"):
            run_topology(net, lambda n: None)

    def test_driver_result_is_returned(self):
        net = two_actor_net()
        assert run_topology(net, lambda n: "done") == "done"


def tiny_databases():
    return [
        [Record("e1", ("peter", "miller")), Record("e2", ("mary", "smith"))],
        [Record("e1", ("peter", "miller")), Record("e3", ("john", "jones"))],
        [Record("e1", ("peter", "miller")), Record("e4", ("anna", "kim"))],
    ]


def tiny_config(**overrides) -> LinkageConfig:
    defaults = dict(
        params=BfParams(l=64, k=2, q=2),
        s_t=0.8,
        pattern="NAI",
        scheme="BSS",
        blocking_attrs=(0, 1),
        seed=5,
    )
    defaults.update(overrides)
    return LinkageConfig(**defaults)


class TestProtocolTraffic:
    def test_nai_batch_needs_p_plus_one_sends_per_block(self):
        # mask in, p - 1 forwards, return to the linkage unit.
        run = LinkageRun(tiny_databases(), tiny_config())
        run.execute()
        per_block = {}
        for step, frm, to, kind, nbytes in run.network.trace:
            if kind in ("mask_batch", "sum_batch"):
                per_block.setdefault(kind, 0)
                per_block[kind] += 1
        blocks = len(run.common_blocks)
        assert per_block["mask_batch"] == blocks
        assert per_block["sum_batch"] == blocks * 3  # p hops, last one back to LU
        assert per_block["mask_batch"] + per_block["sum_batch"] == blocks * (3 + 1)

    def test_trace_dump_is_line_delimited(self, tmp_path):
        run = LinkageRun(tiny_databases(), tiny_config())
        run.execute()
        path = tmp_path / "trace.tsv"
        run.network.dump_trace(path)
        lines = path.read_text().splitlines()
        assert len(lines) == len(run.network.trace)
        step, frm, to, kind, nbytes = lines[0].split("\t")
        assert int(step) == 1 and int(nbytes) >= MESSAGE_HEADER_BYTES

    def test_fixed_seeds_reproduce_byte_counts(self):
        first = LinkageRun(tiny_databases(), tiny_config(scheme="SSS"))
        first.execute()
        second = LinkageRun(tiny_databases(), tiny_config(scheme="SSS"))
        second.execute()
        assert first.network.ledger.snapshot() == second.network.ledger.snapshot()
        assert first.matches == second.matches


class TestViewConfinement:
    def test_received_vectors_differ_from_partial_sums_by_the_mask(self):
        # Replay everything P2 received during a BSS run: each vector must
        # equal (true partial sum) + (the root's mask), never the bare sum.
        databases = tiny_databases()
        config = tiny_config(record_payloads=True)
        run = LinkageRun(databases, config)
        run.execute()
        p2 = run.network.actors["P2"]
        checked = 0
        for message in p2.received:
            if message.kind not in ("mask_batch", "sum_batch"):
                continue
            batch = message.payload
            block_key = None
            for key in run.common_blocks:
                scope = ("nai", key)
                masks = run._mask_matrix(scope, len(run.owners[0].blocks[key]))
                for row, members, root in zip(batch.vectors, batch.members, batch.roots):
                    partial = np.zeros(run.l, dtype=np.int64)
                    for party, rec in zip(batch.parties, members):
                        partial += run.owners[party].bf_phase1[rec]
                    if np.array_equal(row - partial, masks[root]):
                        checked += 1
        assert checked == sum(
            len(m.payload.vectors)
            for m in p2.received
            if m.kind in ("mask_batch", "sum_batch")
        )
