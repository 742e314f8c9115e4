"""Seeded Monte Carlo simulation of the full key-distribution protocol.

Each trial draws independent settings for both observers, samples outcomes
from the exact Born-rule tables of the configured source (honest pair source
or eavesdropper-controlled), and, on key-generation trials under attack, adds
the eavesdropper's measurement record.  Trials consume a fixed number of
counter-based random draws, so any sharding of the trial range reproduces the
single-threaded stream bit for bit.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .attack import SUBSPACE_PAIRS, AttackParams, subspace_analysis, transformed_tripartite
from .correlations import ALPHA, CRITICAL_VISIBILITY, QUANTUM_BELL_VALUE, joint_probs
from .quantum import max_entangled_state, standard_settings

# Bob announces nothing, but his outcome b means Alice's symbol BOB_KEY_REMAP[b]
# on a strictly correlated trial: the possible pairs are (0,0), (1,2), (2,1).
BOB_KEY_REMAP = (0, 2, 1)

# Uniforms consumed per trial (settings, outcome, eve guess, spare).  Four is
# exactly one Philox block, so trial i starts at counter offset i and shards
# concatenate to the serial stream.
_DRAWS_PER_TRIAL = 4

_GROUP_OF_FLAT = np.zeros(9, dtype=np.int8)
_SLOT_OF_FLAT = np.zeros(9, dtype=np.int8)
for _grp, _pairs in enumerate(SUBSPACE_PAIRS):
    for _slot, (_a, _b) in enumerate(_pairs):
        _GROUP_OF_FLAT[3 * _a + _b] = _grp
        _SLOT_OF_FLAT[3 * _a + _b] = _slot

# Eve's key-symbol guess implied by (group, slot): Alice's member of the pair.
_EVE_TRIT = np.array(
    [[pair[0] for pair in pairs] for pairs in SUBSPACE_PAIRS], dtype=np.int8
)


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: trial count, seed, source, and setting distribution.

    attack=None simulates the honest source.  setting_weights, when given,
    holds nine probabilities over the (alice, bob) setting pairs in row-major
    order ((1,1), (1,2), ..., (3,3)); the default is uniform.
    """

    trials: int
    seed: int
    attack: AttackParams | None = None
    setting_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.setting_weights is not None:
            w = np.asarray(self.setting_weights, dtype=float)
            if w.shape != (9,) or w.min() < 0.0 or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError(
                    "setting_weights must be 9 nonnegative values summing to 1"
                )


@dataclass(frozen=True)
class TrialRecord:
    """One protocol round; eavesdropper fields exist only on attacked key rounds."""

    alice_setting: int
    bob_setting: int
    alice_outcome: int
    bob_outcome: int
    eve_subspace: int | None = None
    eve_guess: int | None = None


@dataclass
class ProtocolTranscript:
    """Everything a run produces: per-trial columns plus derived statistics.

    Settings are 1-based, outcomes 0-based; eve columns hold -1 where absent.
    s_estimate/s_std_error are None when some Bell-test setting pair never
    occurred, qber and the keys are None/empty when no key rounds occurred.
    sifted_key_eve is None for honest-source runs.
    """

    alice_settings: np.ndarray
    bob_settings: np.ndarray
    alice_outcomes: np.ndarray
    bob_outcomes: np.ndarray
    eve_subspaces: np.ndarray
    eve_guesses: np.ndarray
    s_estimate: float | None
    s_std_error: float | None
    sifted_key_alice: str
    sifted_key_bob: str
    sifted_key_eve: str | None
    qber: float | None
    aborted: bool
    abort_reason: str

    def records(self) -> list[TrialRecord]:
        """Materialize the per-trial columns as record objects."""
        out = []
        for i in range(len(self.alice_settings)):
            sub = int(self.eve_subspaces[i])
            guess = int(self.eve_guesses[i])
            out.append(
                TrialRecord(
                    alice_setting=int(self.alice_settings[i]),
                    bob_setting=int(self.bob_settings[i]),
                    alice_outcome=int(self.alice_outcomes[i]),
                    bob_outcome=int(self.bob_outcomes[i]),
                    eve_subspace=sub if sub >= 0 else None,
                    eve_guess=guess if guess >= 0 else None,
                )
            )
        return out


def _outcome_tables(config: SimConfig) -> np.ndarray:
    """Exact p(a, b) for each of the nine setting pairs, flattened to (9, 9)."""
    alice, bob = standard_settings()
    tables = np.empty((9, 9))
    if config.attack is None:
        psi = max_entangled_state()
        for m in range(3):
            for n in range(3):
                tables[3 * m + n] = joint_probs(psi, alice[m], bob[n]).reshape(9)
    else:
        for m in range(3):
            for n in range(3):
                psi = transformed_tripartite(config.attack, alice[m], bob[n])
                tables[3 * m + n] = (np.abs(psi.reshape(9, 9)) ** 2).sum(axis=1)
    return tables


def _eve_success_probs(params: AttackParams) -> np.ndarray:
    sub = subspace_analysis(params)
    # A group with w=None has probability zero and is never sampled; the
    # placeholder keeps the array dense.
    return np.array([w if w is not None else 1.0 / 3.0 for w in sub.w])


def _simulate_shard(
    config: SimConfig,
    lo: int,
    hi: int,
    cum_settings: np.ndarray,
    cum_tables: np.ndarray,
    eve_w: np.ndarray | None,
) -> tuple[np.ndarray, ...]:
    """Simulate trials [lo, hi); bitwise equal to the same slice of a full run."""
    bit_gen = Philox(key=config.seed)
    if lo:
        bit_gen.advance(lo)
    u = Generator(bit_gen).random((hi - lo, _DRAWS_PER_TRIAL))

    setting_idx = (u[:, 0][:, None] >= cum_settings).sum(axis=1).astype(np.int8)
    outcome = (u[:, 1][:, None] >= cum_tables[setting_idx]).sum(axis=1).astype(np.int8)
    a = outcome // 3
    b = outcome % 3

    if eve_w is None:
        absent = np.full(hi - lo, -1, dtype=np.int8)
        return setting_idx, a, b, absent, absent

    key_round = setting_idx == 8
    group = _GROUP_OF_FLAT[outcome]
    slot = _SLOT_OF_FLAT[outcome]
    w = eve_w[group]
    r = u[:, 2]
    guess = np.where(
        r < w, slot, np.where(r < (1.0 + w) / 2.0, (slot + 1) % 3, (slot + 2) % 3)
    ).astype(np.int8)
    eve_sub = np.where(key_round, group, np.int8(-1)).astype(np.int8)
    eve_guess = np.where(key_round, guess, np.int8(-1)).astype(np.int8)
    return setting_idx, a, b, eve_sub, eve_guess


def _estimate_bell(setting_idx, a, b) -> tuple[float | None, float | None]:
    """Plug-in Bell estimate from Bell-test rounds, with delta-method error.

    Each of the four test setting pairs contributes the empirical mean of
    Im(weight * ALPHA**(a+b)); the variance of each mean is estimated from
    the same sample and the four contributions are independent.
    """
    weights = {0: -ALPHA**2, 1: ALPHA, 3: ALPHA**2, 4: -ALPHA**2}
    phase = ALPHA ** np.add.outer(np.arange(3), np.arange(3))
    s = 0.0
    var = 0.0
    for idx, wgt in weights.items():
        mask = setting_idx == idx
        n = int(mask.sum())
        if n == 0:
            return None, None
        g = (wgt * phase).imag[a[mask], b[mask]]
        mean = g.mean()
        s += mean
        var += (np.mean(g * g) - mean * mean) / n
    return float(s), float(np.sqrt(max(var, 0.0)))


def _trits_to_str(trits: np.ndarray) -> str:
    return (trits.astype(np.uint8) + ord("0")).tobytes().decode("ascii")


def abort_decision(
    s_estimate: float,
    s_std_error: float,
    v_threshold: float = CRITICAL_VISIBILITY,
    n_sigma: float = 3.0,
) -> tuple[bool, str]:
    """Abort unless the Bell estimate is confidently above the visibility threshold.

    Aborts iff s_estimate + n_sigma * s_std_error < v_threshold * (quantum
    Bell value); the default threshold is the critical visibility, i.e. the
    local-realism line itself.
    """
    if s_std_error < 0.0:
        raise ValueError("s_std_error must be nonnegative")
    bound = v_threshold * QUANTUM_BELL_VALUE
    margin = s_estimate + n_sigma * s_std_error
    if margin < bound:
        return True, (
            f"bell estimate {s_estimate:.6f} (+{n_sigma:g} sigma = {margin:.6f}) "
            f"below threshold {bound:.6f}"
        )
    return False, f"bell estimate {s_estimate:.6f} meets threshold {bound:.6f}"


def run(config: SimConfig, workers: int = 1) -> ProtocolTranscript:
    """Simulate the protocol; output is identical for any worker count.

    Trials are split into contiguous shards, one per worker, each regenerating
    its slice of the counter-based random stream; shard results are merged in
    trial order, so the transcript depends only on the config.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")

    weights = (
        np.full(9, 1.0 / 9.0)
        if config.setting_weights is None
        else np.asarray(config.setting_weights, dtype=float)
    )
    cum_settings = np.cumsum(weights)
    cum_settings[-1] = 1.0  # guard the top bin against cumsum rounding
    cum_tables = np.cumsum(_outcome_tables(config), axis=1)
    cum_tables[:, -1] = 1.0
    eve_w = None if config.attack is None else _eve_success_probs(config.attack)

    bounds = np.linspace(0, config.trials, min(workers, config.trials) + 1).astype(int)
    shards = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if len(shards) == 1:
        parts = [_simulate_shard(config, 0, config.trials, cum_settings, cum_tables, eve_w)]
    else:
        with ProcessPoolExecutor(max_workers=len(shards)) as pool:
            futures = [
                pool.submit(_simulate_shard, config, lo, hi, cum_settings, cum_tables, eve_w)
                for lo, hi in shards
            ]
            parts = [f.result() for f in futures]

    setting_idx, a, b, eve_sub, eve_guess = (
        np.concatenate([part[i] for part in parts]) for i in range(5)
    )
    return _summarize(config, setting_idx, a, b, eve_sub, eve_guess)


def _summarize(config, setting_idx, a, b, eve_sub, eve_guess) -> ProtocolTranscript:
    s_estimate, s_std_error = _estimate_bell(setting_idx, a, b)

    sifted = setting_idx == 8
    alice_trits = a[sifted]
    bob_trits = np.asarray(BOB_KEY_REMAP, dtype=np.int8)[b[sifted]]
    key_alice = _trits_to_str(alice_trits)
    key_bob = _trits_to_str(bob_trits)
    qber = float(np.mean(bob_trits != alice_trits)) if alice_trits.size else None

    key_eve = None
    if config.attack is not None:
        key_eve = _trits_to_str(_EVE_TRIT[eve_sub[sifted], eve_guess[sifted]])

    if s_estimate is None:
        aborted, reason = False, "bell estimate unavailable (no test rounds)"
    else:
        aborted, reason = abort_decision(s_estimate, s_std_error)

    return ProtocolTranscript(
        alice_settings=(setting_idx // 3 + 1).astype(np.int8),
        bob_settings=(setting_idx % 3 + 1).astype(np.int8),
        alice_outcomes=a,
        bob_outcomes=b,
        eve_subspaces=eve_sub,
        eve_guesses=eve_guess,
        s_estimate=s_estimate,
        s_std_error=s_std_error,
        sifted_key_alice=key_alice,
        sifted_key_bob=key_bob,
        sifted_key_eve=key_eve,
        qber=qber,
        aborted=aborted,
        abort_reason=reason,
    )


def extract_key(records, role: str) -> str:
    """Key trits of one party from key-generation trial records.

    Alice's trit is her outcome; Bob's is his outcome remapped through the
    strict correlation; Eve's is the Alice symbol implied by her recorded
    (subspace, guess).  Every record must have both settings equal to 3.
    """
    trits = []
    for rec in records:
        if rec.alice_setting != 3 or rec.bob_setting != 3:
            raise ValueError(
                f"key extraction needs settings (3, 3), got "
                f"({rec.alice_setting}, {rec.bob_setting})"
            )
        if role == "alice":
            trits.append(rec.alice_outcome)
        elif role == "bob":
            trits.append(BOB_KEY_REMAP[rec.bob_outcome])
        elif role == "eve":
            if rec.eve_subspace is None or rec.eve_guess is None:
                raise ValueError("record carries no eavesdropper fields")
            trits.append(int(_EVE_TRIT[rec.eve_subspace, rec.eve_guess]))
        else:
            raise ValueError(f"unknown role {role!r}")
    return "".join(str(t) for t in trits)


TRANSCRIPT_HEADER = "# trial\talice_setting\tbob_setting\talice_outcome\tbob_outcome\teve_subspace\teve_guess"


def write_transcript(transcript: ProtocolTranscript, path) -> None:
    """Write one tab-separated line per trial; eve fields are '-' where absent."""
    lines = [TRANSCRIPT_HEADER]
    for i in range(len(transcript.alice_settings)):
        sub = int(transcript.eve_subspaces[i])
        guess = int(transcript.eve_guesses[i])
        lines.append(
            f"{i}\t{transcript.alice_settings[i]}\t{transcript.bob_settings[i]}"
            f"\t{transcript.alice_outcomes[i]}\t{transcript.bob_outcomes[i]}"
            f"\t{sub if sub >= 0 else '-'}\t{guess if guess >= 0 else '-'}"
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def summary_dict(config: SimConfig, transcript: ProtocolTranscript) -> dict:
    """JSON-ready summary of a run."""
    return {
        "trials": config.trials,
        "seed": config.seed,
        "source": "honest" if config.attack is None else "attack",
        "f": None if config.attack is None else config.attack.f,
        "lam": None if config.attack is None else config.attack.lam,
        "s_estimate": transcript.s_estimate,
        "s_std_error": transcript.s_std_error,
        "qber": transcript.qber,
        "sifted_length": len(transcript.sifted_key_alice),
        "aborted": transcript.aborted,
        "abort_reason": transcript.abort_reason,
    }


def write_summary(config: SimConfig, transcript: ProtocolTranscript, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(json.dumps(summary_dict(config, transcript), indent=2, sort_keys=True) + "\n")
