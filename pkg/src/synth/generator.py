"""Seeded synthetic datasets with known latent classes.

Each trial draws a quadrant, samples its (valence, arousal) scores from that
quadrant's blob and plants the latent class into the signals:

- EEG: band-limited noise with per-channel gain, band-centre sinusoids on
  the effect channels of high-class trials, common-mode 50 Hz mains.
- EDA: tonic level with drift plus SCR bumps (difference of exponentials,
  rise 1 s, decay 4 s) whose rate grows with ``e4_effect``.
- BVP: pulse train with a dicrotic bump; heart rate shifts with ``e4_effect``.
- Temp: slow ramp.

Every trial has its own generator derived from the root seed, so the output
does not depend on generation order.
"""

from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd
import structlog

from scipy import signal

from src.dataset import ClipInfo, Dataset, SelfAssessment, SignalTrace, Trial, save_dataset, write_json
from src.utils.constants import EEG_BANDS, EEG_MONTAGE, QUADRANTS, SCORE_MAX, SCORE_MIN
from src.utils.seeding import rng_for

from .spec import ClipTruth, GroundTruth, SynthSpec, TrialTruth


logger = structlog.get_logger()

MAINS_HZ = 50.0
BACKGROUND_CUTOFF_HZ = 45.0
BASE_SCR_RATE = 0.05
BASE_HEART_RATE = 70.0
HEART_RATE_SHIFT = 10.0
SCR_RISE_S = 1.0
SCR_DECAY_S = 4.0
PULSE_WIDTH_S = 0.1
DICROTIC_DELAY_S = 0.25
DICROTIC_GAIN = 0.3

CATALOG_TAGS = (("comedy",), ("horror", "thriller"), ("drama",), ("action",), ("romance",))

PathLike = Union[str, Path]


@lru_cache(maxsize=8)
def _background_filter(fs: float) -> np.ndarray:
    return signal.butter(4, BACKGROUND_CUTOFF_HZ, btype="lowpass", fs=fs, output="sos")


def _band_centre(band: str) -> float:
    lo, hi = EEG_BANDS[band]
    return (lo + hi) / 2.0


def clip_layout(spec: SynthSpec) -> Tuple[List[str], Dict[str, List[str]]]:
    """Common clip ids and each participant's clip list.

    Non-common clips come from a pool twice the per-participant share,
    alternating halves between participants, so none of them is seen by all.
    """
    extra = spec.clips - spec.common_clips
    pool_size = extra * 2 if spec.participants > 1 else extra
    width = max(2, len(str(spec.common_clips + pool_size)))
    ids = [f"{i:0{width}d}" for i in range(1, spec.common_clips + pool_size + 1)]
    common, pool = ids[: spec.common_clips], ids[spec.common_clips :]

    pwidth = max(2, len(str(spec.participants)))
    layout = {}
    for p in range(spec.participants):
        own = [pool[(p * extra + j) % len(pool)] for j in range(extra)] if extra else []
        layout[f"{p + 1:0{pwidth}d}"] = sorted(common + own)
    return common, layout


def _eeg(spec: SynthSpec, rng: np.random.Generator, classes: Dict[str, int]) -> SignalTrace:
    fs = spec.eeg_rate_hz
    n = int(round(spec.duration_s * fs))
    t = np.arange(n) / fs

    gains = spec.noise_sd * rng.uniform(0.8, 1.2, len(EEG_MONTAGE))
    noise = rng.standard_normal((len(EEG_MONTAGE), n))
    eeg = signal.sosfilt(_background_filter(fs), noise, axis=1) * gains[:, None]

    for effect in spec.effects:
        phases = rng.uniform(0.0, 2 * np.pi, len(EEG_MONTAGE))
        if not classes[effect.target]:
            continue
        freq = _band_centre(effect.band)
        for ch in effect.channels or EEG_MONTAGE:
            i = EEG_MONTAGE.index(ch)
            eeg[i] += effect.amplitude * np.sin(2 * np.pi * freq * t + phases[i])

    mains_phase = rng.uniform(0.0, 2 * np.pi)
    eeg += spec.mains_amplitude * np.sin(2 * np.pi * MAINS_HZ * t + mains_phase)
    return SignalTrace(eeg, fs, EEG_MONTAGE)


def scr_shape(t: np.ndarray) -> np.ndarray:
    """Unit-peak skin-conductance response for ``t`` seconds after onset."""
    x = np.clip(t, 0.0, None)
    bump = np.exp(-x / SCR_DECAY_S) - np.exp(-x / SCR_RISE_S)
    ratio = SCR_DECAY_S / SCR_RISE_S
    t_peak = SCR_DECAY_S * np.log(ratio) / (ratio - 1.0)
    peak = np.exp(-t_peak / SCR_DECAY_S) - np.exp(-t_peak / SCR_RISE_S)
    return np.where(t >= 0, bump / peak, 0.0)


def _eda(spec: SynthSpec, rng: np.random.Generator, high: int) -> Tuple[SignalTrace, int]:
    fs = spec.eda_rate_hz
    n = int(round(spec.duration_s * fs))
    t = np.arange(n) / fs

    level = rng.uniform(1.5, 3.0)
    drift = rng.normal(0.0, 0.002)
    rate = BASE_SCR_RATE * (1.0 + spec.e4_effect * high)
    count = int(rng.poisson(rate * spec.duration_s))
    onsets = np.sort(rng.uniform(0.0, max(spec.duration_s - 2.0, 0.0), count))
    amplitudes = rng.uniform(0.1, 0.5, count)

    eda = level + drift * t + rng.normal(0.0, 0.003, n)
    for onset, amplitude in zip(onsets, amplitudes):
        eda += amplitude * scr_shape(t - onset)
    return SignalTrace(eda[None, :], fs, ("eda",)), count


def _bvp(spec: SynthSpec, rng: np.random.Generator, high: int) -> Tuple[SignalTrace, float]:
    fs = spec.bvp_rate_hz
    n = int(round(spec.duration_s * fs))
    t = np.arange(n) / fs

    heart_rate = BASE_HEART_RATE + HEART_RATE_SHIFT * spec.e4_effect * high + rng.normal(0.0, 2.0)
    base_ibi = 60.0 / heart_rate
    wobble = rng.uniform(0.0, 2 * np.pi)
    beats = [rng.uniform(0.0, base_ibi)]
    while beats[-1] < spec.duration_s + 1.0:
        ibi = base_ibi * (1.0 + 0.03 * np.sin(2 * np.pi * 0.1 * beats[-1] + wobble))
        beats.append(beats[-1] + ibi + rng.normal(0.0, 0.01))

    offsets = t[None, :] - np.asarray(beats)[:, None]
    width = 2 * PULSE_WIDTH_S**2
    pulses = np.exp(-(offsets**2) / width) + DICROTIC_GAIN * np.exp(
        -((offsets - DICROTIC_DELAY_S) ** 2) / width
    )
    bvp = rng.uniform(0.8, 1.2) * pulses.sum(axis=0) + rng.normal(0.0, 0.01, n)
    return SignalTrace(bvp[None, :], fs, ("bvp",)), float(heart_rate)


def _temp(spec: SynthSpec, rng: np.random.Generator) -> SignalTrace:
    fs = spec.temp_rate_hz
    n = int(round(spec.duration_s * fs))
    t = np.arange(n) / fs
    temp = 33.0 + rng.normal(0.0, 0.5) + rng.normal(0.0, 0.003) * t + rng.normal(0.0, 0.01, n)
    return SignalTrace(temp[None, :], fs, ("temp",))


def _score(value: float) -> float:
    return round(float(np.clip(value, SCORE_MIN, SCORE_MAX)), 3)


def _trial(
    spec: SynthSpec, participant_id: str, clip_id: str, common: bool
) -> Tuple[Trial, TrialTruth]:
    rng = rng_for(spec.seed, "trial", participant_id, clip_id)
    quadrant = int(rng.integers(len(QUADRANTS)))
    classes = {"valence": quadrant // 2, "arousal": quadrant % 2}
    blob = spec.va_blobs[quadrant]
    valence, arousal = (_score(v) for v in rng.multivariate_normal(blob.mean, blob.cov))
    happiness, fear, excitement = (_score(v) for v in rng.uniform(SCORE_MIN, SCORE_MAX, 3))

    e4_high = classes[spec.e4_target]
    eeg = _eeg(spec, rng, classes)
    eda, scr_count = _eda(spec, rng, e4_high)
    bvp, heart_rate = _bvp(spec, rng, e4_high)
    temp = _temp(spec, rng)

    trial = Trial(
        participant_id=participant_id,
        clip_id=clip_id,
        eeg=eeg,
        eda=eda,
        bvp=bvp,
        temp=temp,
        assessment=SelfAssessment(
            valence=valence,
            arousal=arousal,
            happiness=happiness,
            fear=fear,
            excitement=excitement,
        ),
        is_common_clip=common,
    )
    truth = TrialTruth(
        participant_id=participant_id,
        clip_id=clip_id,
        is_common_clip=common,
        quadrant=QUADRANTS[quadrant],
        valence=valence,
        arousal=arousal,
        valence_class=classes["valence"],
        arousal_class=classes["arousal"],
        heart_rate_bpm=round(heart_rate, 6),
        scr_count=scr_count,
    )
    return trial, truth


def build_dataset(spec: SynthSpec) -> Tuple[Dataset, GroundTruth]:
    """Generate a dataset in memory together with its ground truth."""
    common, layout = clip_layout(spec)
    trials, truths = [], []
    for participant_id, clips in layout.items():
        for clip_id in clips:
            trial, truth = _trial(spec, participant_id, clip_id, clip_id in common)
            trials.append(trial)
            truths.append(truth)

    all_clips = sorted({c for clips in layout.values() for c in clips})
    catalog = {
        cid: ClipInfo(cid, f"Synthetic clip {cid}", CATALOG_TAGS[i % len(CATALOG_TAGS)])
        for i, cid in enumerate(all_clips)
    }
    dataset = Dataset(
        trials=tuple(trials),
        clip_catalog=catalog,
        sample_rates={
            "eeg": spec.eeg_rate_hz,
            "eda": spec.eda_rate_hz,
            "bvp": spec.bvp_rate_hz,
            "temp": spec.temp_rate_hz,
        },
    )
    truths.sort(key=lambda t: (t.participant_id, t.clip_id))
    manifest = GroundTruth(spec=spec, common_clips=common, trials=truths)
    logger.info(
        "Synthetic dataset generated",
        participants=spec.participants,
        clips=len(all_clips),
        common_clips=len(common),
        trials=len(dataset),
    )
    return dataset, manifest


def _separated_centres(rng: np.random.Generator, k: int, min_distance: float = 3.0) -> np.ndarray:
    centres: List[np.ndarray] = []
    while len(centres) < k:
        candidate = rng.uniform(2.0, 8.0, 3)
        if all(np.linalg.norm(candidate - c) >= min_distance for c in centres):
            centres.append(candidate)
    return np.array(centres)


def build_ratings(spec: SynthSpec) -> Tuple[pd.DataFrame, List[ClipTruth]]:
    """Rater table of candidate clips planted around ``ratings_k`` centres.

    Clip positions live in (happiness, fear, excitement); each rater scores a
    clip at its position plus noise.

    Returns:
        One row per (clip, rater) and the planted cluster of each clip
    """
    rng = rng_for(spec.seed, "ratings")
    k = spec.ratings_k
    centres = _separated_centres(rng, k)
    va_centres = rng.uniform(2.0, 8.0, (k, 2))
    width = max(3, len(str(spec.ratings_clips)))

    rows, truths = [], []
    for i in range(spec.ratings_clips):
        cluster = i % k
        clip_id = f"{i + 1:0{width}d}"
        position = np.clip(centres[cluster] + rng.normal(0.0, 0.5, 3), SCORE_MIN, SCORE_MAX)
        truths.append(
            ClipTruth(clip_id=clip_id, cluster=cluster, position=tuple(round(p, 6) for p in position))
        )
        for rater in range(spec.raters):
            va = va_centres[cluster] + rng.normal(0.0, 0.8, 2)
            hfe = position + rng.normal(0.0, 0.3, 3)
            rows.append(
                {
                    "clip_id": clip_id,
                    "rater": f"R{rater + 1:02d}",
                    "valence": _score(va[0]),
                    "arousal": _score(va[1]),
                    "happiness": _score(hfe[0]),
                    "fear": _score(hfe[1]),
                    "excitement": _score(hfe[2]),
                }
            )
    columns = ["clip_id", "rater", "valence", "arousal", "happiness", "fear", "excitement"]
    return pd.DataFrame(rows, columns=columns), truths


def generate(spec: SynthSpec, root: PathLike) -> Tuple[Path, GroundTruth]:
    """Write the dataset, ``manifest.json`` and, if requested, ``ratings.csv``."""
    root = Path(root)
    dataset, manifest = build_dataset(spec)
    save_dataset(dataset, root)
    if spec.ratings_clips:
        ratings, clip_truths = build_ratings(spec)
        ratings.to_csv(root / "ratings.csv", index=False, lineterminator="\n")
        manifest = manifest.model_copy(update={"rating_clips": clip_truths})
    write_json(root / "manifest.json", manifest.model_dump(mode="json"))
    logger.info("Synthetic dataset written", root=str(root))
    return root, manifest
