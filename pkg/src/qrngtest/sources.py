"""Seeded bit sources: comparison generators and QRNG noise models.

The stochastic models draw uniforms from a counter-based SplitMix64
stream (increment ``0x9E3779B97F4A7C15``, finaliser multipliers
``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``).  Trial ``t`` of a job
reads stream ``t``, so trials can be produced in any order and still
come out identical.  ``mt19937`` and ``pi_binary`` are single sequential
streams cut into consecutive trials.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
import secrets
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .bitseq import BitSequence, TrialSet, save_trials
from .mt19937 import MT19937
from .pidigits import pi_bits

KINDS = (
    "ideal_qrng",
    "qrng_type1",
    "qrng_type2",
    "qrng_type3",
    "mt19937",
    "os_csprng",
    "pi_binary",
    "biased",
    "biased_two_step",
)

QRNG_LABELS = {
    "ideal_qrng": "basic",
    "qrng_type1": "type1",
    "qrng_type2": "type2",
    "qrng_type3": "type3",
}

COMPARISON_KINDS = ("pi_binary", "mt19937", "os_csprng", "biased", "biased_two_step")

_DEFAULTS = {
    "ideal_qrng": {"p0": 0.5},
    "qrng_type1": {"p0": 0.52},
    "qrng_type2": {"b": 0.52},
    "qrng_type3": {"p0": 0.52, "rho": 0.5, "qubit_count": 4},
    "biased": {"p0": 0.52},
    "biased_two_step": {"p0": 0.52, "b": 0.52},
}

DEFAULT_SHOTS = 8192
DEFAULT_TRIALS = 128

_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, stream: int, count: int) -> np.ndarray:
    """``count`` 64-bit outputs of the SplitMix64 stream keyed by (seed, stream)."""
    key = _mix64(np.array([(seed + _GOLDEN * (stream + 1)) & _MASK64], dtype=np.uint64))[0]
    with np.errstate(over="ignore"):
        z = key + np.uint64(_GOLDEN) * np.arange(1, count + 1, dtype=np.uint64)
        return _mix64(z)


def uniforms(seed: int, stream: int, count: int) -> np.ndarray:
    """Uniform deviates in [0, 1) with 53-bit resolution."""
    return (splitmix64(seed, stream, count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class SourceSpec:
    """Parametric description of a bit source.

    ``p0`` is a probability of emitting 0 except for ``qrng_type1`` (and the
    Type-1 qubits of ``qrng_type3``), where it is the probability of staying
    in the initial state 1.  ``b`` is the per-stage bias of two-stage
    models.  ``rho`` is the pairwise correlation injected into Type-3 shots.
    """

    kind: str
    seed: int = 0
    p0: float | None = None
    b: float | None = None
    rho: float | None = None
    qubit_count: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}; expected one of {KINDS}")
        for key, value in _DEFAULTS.get(self.kind, {}).items():
            if getattr(self, key) is None:
                object.__setattr__(self, key, value)
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed out of range")
        for name in ("p0", "b"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} out of range")
        if self.rho is not None and not -1.0 <= self.rho <= 1.0:
            raise ValueError("rho out of range")
        if self.kind == "qrng_type3" and self.qubit_count != 4:
            raise ValueError("qrng_type3 uses exactly 4 qubits")
        if not self.label:
            object.__setattr__(self, "label", self.kind)

    @property
    def bits_per_shot(self) -> int:
        return self.qubit_count if self.kind == "qrng_type3" else 1

    @property
    def qrng_label(self) -> str:
        return QRNG_LABELS.get(self.kind, "comparison")

    @property
    def deterministic(self) -> bool:
        return self.kind != "os_csprng"

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class GenerationJob:
    spec: SourceSpec
    trials: int = DEFAULT_TRIALS
    shots_per_trial: int = DEFAULT_SHOTS

    def __post_init__(self):
        if self.trials < 1 or self.shots_per_trial < 1:
            raise ValueError("trials and shots_per_trial must be positive")

    @property
    def trial_bits(self) -> int:
        return self.shots_per_trial * self.spec.bits_per_shot


def _bernoulli_zero(u: np.ndarray, p_zero: float) -> np.ndarray:
    """Bit is 0 with probability ``p_zero``."""
    return (u >= p_zero).astype(np.uint8)


def _two_stage(u: np.ndarray, p_first_zero: float, p_keep: float) -> np.ndarray:
    first = _bernoulli_zero(u[:, 0], p_first_zero)
    flip = (u[:, 1] >= p_keep).astype(np.uint8)
    return first ^ flip


def _type3(u: np.ndarray, p0: float, rho: float) -> np.ndarray:
    """Four bits per shot: qubits 0-1 Basic model, 2-3 Type-1 model.

    Each qubit copies a shared latent fair bit with probability sqrt(|rho|),
    giving pairwise correlation rho between qubits when marginals are fair.
    For rho < 0 the odd qubits copy the latent bit's complement.
    """
    shots = u.shape[0]
    latent = (u[:, 0] < 0.5).astype(np.uint8)
    copy_p = math.sqrt(abs(rho))
    out = np.empty((shots, 4), dtype=np.uint8)
    for q in range(4):
        own = _bernoulli_zero(u[:, 1 + q], p0) if q < 2 else 1 - _bernoulli_zero(u[:, 1 + q], p0)
        shared = latent ^ 1 if (rho < 0 and q % 2) else latent
        out[:, q] = np.where(u[:, 5 + q] < copy_p, shared, own)
    return out.reshape(-1)


def _stochastic_trial(spec: SourceSpec, stream: int, shots: int) -> np.ndarray:
    k = spec.kind
    if k in ("ideal_qrng", "biased"):
        return _bernoulli_zero(uniforms(spec.seed, stream, shots), spec.p0)
    if k == "qrng_type1":
        return 1 - _bernoulli_zero(uniforms(spec.seed, stream, shots), spec.p0)
    if k == "qrng_type2":
        return _two_stage(uniforms(spec.seed, stream, 2 * shots).reshape(shots, 2), spec.b, spec.b)
    if k == "biased_two_step":
        return _two_stage(uniforms(spec.seed, stream, 2 * shots).reshape(shots, 2), spec.p0, spec.b)
    if k == "qrng_type3":
        return _type3(uniforms(spec.seed, stream, 9 * shots).reshape(shots, 9), spec.p0, spec.rho)
    raise AssertionError(k)


def generate(job: GenerationJob) -> TrialSet:
    """Produce ``job.trials`` trials of ``job.trial_bits`` bits each."""
    spec = job.spec
    L = job.trial_bits
    if spec.kind == "mt19937":
        stream = MT19937(spec.seed).bits(job.trials * L)
        trials = [stream[t * L : (t + 1) * L] for t in range(job.trials)]
    elif spec.kind == "pi_binary":
        stream = pi_bits(job.trials * L)
        trials = [stream[t * L : (t + 1) * L] for t in range(job.trials)]
    elif spec.kind == "os_csprng":
        try:
            raw = secrets.token_bytes(-(-job.trials * L // 8))
        except NotImplementedError as exc:  # pragma: no cover - platform without entropy
            raise RuntimeError("entropy source unavailable") from exc
        stream = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
        trials = [stream[t * L : (t + 1) * L] for t in range(job.trials)]
    else:
        trials = [_stochastic_trial(spec, t, job.shots_per_trial) for t in range(job.trials)]
    return TrialSet(tuple(BitSequence(t) for t in trials), source_label=spec.label, qrng_label=spec.qrng_label)


def save_generated(tset: TrialSet, job: GenerationJob, out_dir, stem: str | None = None) -> Path:
    """Write ``<stem>.txt`` (ascii01) plus a ``<stem>.meta.json`` sidecar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or job.spec.label
    path = out_dir / f"{stem}.txt"
    save_trials(tset, path)
    meta = {
        "spec": job.spec.to_dict(),
        "trials": job.trials,
        "shots_per_trial": job.shots_per_trial,
        "trial_bits": job.trial_bits,
        "qrng_label": tset.qrng_label,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    with open(out_dir / f"{stem}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
