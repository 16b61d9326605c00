"""Multi-party privacy-preserving record linkage with counting Bloom filters."""

from .blocking import build_blocks, intersect_blocks, soundex
from .encoding import (
    BfParams,
    BloomFilter,
    ClkEncoder,
    CountingBloomFilter,
    Record,
    dice_bf,
    dice_cbf,
    encode_clk,
    extract_qgrams,
    false_positive_rate,
    memory_bits,
    optimal_k,
    sum_to_cbf,
)
from .evaluation import (
    AttackResult,
    ConfusionCounts,
    bf_attack,
    cbf_attack,
    confusion_from_matches,
    f_measure,
)
from .experiment import (
    ExperimentConfig,
    LinkageReport,
    emit_report,
    ingest_csv,
    load_config,
    parse_report,
    run_experiment,
    sweep,
)
from .paillier import PaillierKeypair, PaillierPublicKey, keypair_from_primes, paillier_keygen
from .protocol import (
    CandidateSet,
    LinkageConfig,
    LinkageRun,
    MatchResult,
    RingPlan,
    collusion_combinations,
    count_candidates,
    group_rings,
    run_nai,
    run_rbr,
    run_seq,
)
from .securesum import (
    MaskedVector,
    RandomMaskVector,
    SaltKey,
    bss_add,
    bss_start,
    bss_unmask,
    hss_add,
    hss_start,
    hss_unmask,
    sss_add,
    sss_start,
    sss_unmask,
)
from .simnet import Channel, DeadlockError, Network, PartyActor, TrafficLedger, run_topology

__version__ = "0.1.0"
