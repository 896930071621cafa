"""Diagnostics relating segmentation behavior to translation quality.

Two probes: per-sentence morphological richness (morphs per token under a
reference unsupervised segmenter) against per-sentence scores, and UNK
counting of segmented output against a fixed piece vocabulary.  Both emit
CSV for downstream plotting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AlignmentError, ConfigError
from .morf import MorfModel, viterbi_segment


@dataclass(frozen=True)
class RichnessRecord:
    index: int
    morphs_per_token: float
    score: float


@dataclass(frozen=True)
class RichnessBin:
    lo: float
    hi: float
    count: int
    mean_score: float


@dataclass(frozen=True)
class UnkReport:
    system: str
    total_tokens: int
    unk_tokens: int

    @property
    def unk_rate(self) -> float:
        return self.unk_tokens / self.total_tokens if self.total_tokens else 0.0


def richness_table(
    probe_model: MorfModel, sentences, per_sentence_scores
) -> list[RichnessRecord]:
    """Per-sentence morphs-per-token under the probe segmenter, paired with
    that sentence's score and sorted by richness."""
    sentences = list(sentences)
    scores = list(per_sentence_scores)
    if len(sentences) != len(scores):
        raise AlignmentError(
            "scores not aligned with sentences: %d vs %d" % (len(scores), len(sentences))
        )
    records = []
    for idx, (sent, score) in enumerate(zip(sentences, scores)):
        tokens = sent.tokens if hasattr(sent, "tokens") else sent
        morphs = sum(len(viterbi_segment(probe_model, tok)) for tok in tokens)
        records.append(RichnessRecord(idx, morphs / len(tokens), float(score)))
    return sorted(records, key=lambda r: (r.morphs_per_token, r.index))


def bin_richness(records: list[RichnessRecord], bins: int = 10) -> list[RichnessBin]:
    """Equal-width bins over the observed richness range with per-bin mean
    score; a degenerate range collapses to a single bin."""
    if not records:
        return []
    if bins < 1:
        raise ConfigError("bins must be positive")
    lo = min(r.morphs_per_token for r in records)
    hi = max(r.morphs_per_token for r in records)
    if hi == lo:
        mean = sum(r.score for r in records) / len(records)
        return [RichnessBin(lo, hi, len(records), mean)]
    width = (hi - lo) / bins
    grouped: list[list[float]] = [[] for _ in range(bins)]
    for r in records:
        k = min(int((r.morphs_per_token - lo) / width), bins - 1)
        grouped[k].append(r.score)
    out = []
    for k, scores in enumerate(grouped):
        out.append(
            RichnessBin(
                lo + k * width,
                lo + (k + 1) * width,
                len(scores),
                sum(scores) / len(scores) if scores else float("nan"),
            )
        )
    return out


def richness_csv(records: list[RichnessRecord]) -> str:
    lines = ["idx,richness,score"]
    for r in records:
        lines.append("%d,%s,%s" % (r.index, repr(r.morphs_per_token), repr(r.score)))
    return "\n".join(lines) + "\n"


def richness_bins_csv(bins: list[RichnessBin]) -> str:
    lines = ["bin_lo,bin_hi,count,mean_score"]
    for b in bins:
        lines.append("%s,%s,%d,%s" % (repr(b.lo), repr(b.hi), b.count, repr(b.mean_score)))
    return "\n".join(lines) + "\n"


def unk_report(segmented_corpus, vocabulary: set[str], system: str = "system") -> UnkReport:
    """Count produced pieces absent from the given piece vocabulary.

    ``segmented_corpus`` is a sequence of sentences, each a sequence of
    tokens, each a sequence of pieces (the shape ``segment_corpus``
    returns).
    """
    if not vocabulary:
        raise ConfigError("empty piece vocabulary")
    total = 0
    unk = 0
    for sent in segmented_corpus:
        for token_pieces in sent:
            for piece in token_pieces:
                total += 1
                unk += piece not in vocabulary
    return UnkReport(system=system, total_tokens=total, unk_tokens=unk)


def unk_csv(reports: list[UnkReport]) -> str:
    lines = ["system,total,unk,rate"]
    for r in reports:
        lines.append("%s,%d,%d,%s" % (r.system, r.total_tokens, r.unk_tokens, repr(r.unk_rate)))
    return "\n".join(lines) + "\n"
