"""Supervised surface segmentation as character tagging with a linear-chain CRF.

Characters carry BMES labels (Begin / Middle / End / Single); the chain is
hard-constrained to well-formed sequences, so decoding always yields a
surface segmentation whose concatenation restores the word.  Features are
character substrings drawn from a window around each position, keyed by
offset and content.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .corpus import SURFACE, SegmentationDataset, SegmentedWord
from .errors import DataError, UnsupportedModeError

LABELS = ("B", "E", "M", "S")  # index order doubles as the tie-break order
_L = {lab: i for i, lab in enumerate(LABELS)}

ALLOWED_NEXT = {
    "B": ("M", "E"),
    "M": ("M", "E"),
    "E": ("B", "S"),
    "S": ("B", "S"),
}
START_LABELS = ("B", "S")
FINAL_LABELS = ("E", "S")
ALLOWED_PAIRS = tuple(
    (a, b) for a in LABELS for b in LABELS if b in ALLOWED_NEXT[a]
)

PAD = "⟨pad⟩"  # ⟨pad⟩


def validate_bmes(labels) -> None:
    """Raise DataError (with the offending index) on ill-formed label runs."""
    if not labels:
        raise DataError("empty label sequence")
    if labels[0] not in START_LABELS:
        raise DataError("bad start label %r at index 0" % (labels[0],))
    for i, (a, b) in enumerate(zip(labels, labels[1:])):
        if b not in ALLOWED_NEXT.get(a, ()):
            raise DataError("bad transition %s->%s at index %d" % (a, b, i + 1))
    if labels[-1] not in FINAL_LABELS:
        raise DataError(
            "bad final label %r at index %d" % (labels[-1], len(labels) - 1)
        )


@dataclass(frozen=True)
class BmesSequence:
    """A character sequence with a well-formed BMES labeling."""

    chars: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.chars) != len(self.labels):
            raise DataError("chars and labels differ in length")
        validate_bmes(self.labels)

    def to_morphs(self) -> tuple[str, ...]:
        return labels_to_morphs("".join(self.chars), self.labels)


def morphs_to_labels(morphs) -> tuple[str, ...]:
    labels = []
    for m in morphs:
        if len(m) == 1:
            labels.append("S")
        else:
            labels.extend(["B"] + ["M"] * (len(m) - 2) + ["E"])
    return tuple(labels)


def labels_to_morphs(word: str, labels) -> tuple[str, ...]:
    morphs = []
    start = 0
    for i, lab in enumerate(labels):
        if lab in ("E", "S"):
            morphs.append(word[start : i + 1])
            start = i + 1
    return tuple(morphs)


def extract_features(word: str, i: int, delta: int = 3) -> list[tuple[int, str]]:
    """Window features for position ``i``: every character offset in
    [-delta, +delta] (padded outside the word) plus all substrings of
    length 2..delta lying fully inside both the window and the word."""
    if not 0 <= i < len(word):
        raise DataError("position %d outside word of length %d" % (i, len(word)))
    feats = []
    for o in range(-delta, delta + 1):
        p = i + o
        feats.append((o, word[p] if 0 <= p < len(word) else PAD))
    for length in range(2, delta + 1):
        for a in range(i - delta, i + delta - length + 2):
            if a < 0 or a + length > len(word):
                continue
            feats.append((a - i, word[a : a + length]))
    return feats


@dataclass
class CrfModel:
    """Feature and transition weights with the window radius they were
    trained for.  Parameters pack feature-major (F x 4 labels) followed by
    the allowed transition pairs; forbidden transitions stay -inf and are
    not parameters."""

    delta: int
    l2: float
    feat_index: dict[tuple[int, str], int]
    weights: np.ndarray  # (F, 4)
    trans: np.ndarray  # (4, 4), -inf on forbidden pairs
    objective_history: list[float] = field(default_factory=list)

    @classmethod
    def zeros(cls, delta: int, l2: float, feat_index) -> "CrfModel":
        trans = np.full((4, 4), -np.inf)
        for a, b in ALLOWED_PAIRS:
            trans[_L[a], _L[b]] = 0.0
        return cls(
            delta=delta,
            l2=l2,
            feat_index=dict(feat_index),
            weights=np.zeros((len(feat_index), 4)),
            trans=trans,
        )

    def packed(self) -> np.ndarray:
        pairs = [self.trans[_L[a], _L[b]] for a, b in ALLOWED_PAIRS]
        return np.concatenate([self.weights.ravel(), np.asarray(pairs)])

    def set_packed(self, vec: np.ndarray) -> None:
        nfeat = len(self.feat_index)
        self.weights = vec[: nfeat * 4].reshape(nfeat, 4).copy()
        for k, (a, b) in enumerate(ALLOWED_PAIRS):
            self.trans[_L[a], _L[b]] = vec[nfeat * 4 + k]

    def n_params(self) -> int:
        return len(self.feat_index) * 4 + len(ALLOWED_PAIRS)


def _emission_scores(model: CrfModel, word: str) -> tuple[np.ndarray, list[list[int]]]:
    n = len(word)
    feats = []
    scores = np.zeros((n, 4))
    for i in range(n):
        idxs = [
            model.feat_index[f]
            for f in extract_features(word, i, model.delta)
            if f in model.feat_index
        ]
        feats.append(idxs)
        if idxs:
            scores[i] = model.weights[idxs].sum(axis=0)
    return scores, feats


_START_MASK = np.array([0.0 if l in START_LABELS else -np.inf for l in LABELS])
_FINAL_MASK = np.array([0.0 if l in FINAL_LABELS else -np.inf for l in LABELS])


def _forward(scores: np.ndarray, trans: np.ndarray):
    n = scores.shape[0]
    alpha = np.empty((n, 4))
    alpha[0] = scores[0] + _START_MASK
    for i in range(1, n):
        alpha[i] = scores[i] + logsumexp(alpha[i - 1][:, None] + trans, axis=0)
    log_z = logsumexp(alpha[-1] + _FINAL_MASK)
    return alpha, log_z


def _backward(scores: np.ndarray, trans: np.ndarray) -> np.ndarray:
    n = scores.shape[0]
    beta = np.empty((n, 4))
    beta[-1] = _FINAL_MASK
    for i in range(n - 2, -1, -1):
        beta[i] = logsumexp(trans + (scores[i + 1] + beta[i + 1])[None, :], axis=1)
    return beta


def marginals(model: CrfModel, word: str):
    """Per-position label marginals and the sequence partition value."""
    scores, _ = _emission_scores(model, word)
    alpha, log_z = _forward(scores, model.trans)
    beta = _backward(scores, model.trans)
    return np.exp(alpha + beta - log_z), log_z


def _sequences(dataset: SegmentationDataset):
    seqs = []
    for idx, entry in enumerate(dataset.entries):
        labels = morphs_to_labels(entry.morphs)
        try:
            validate_bmes(labels)
        except DataError as exc:
            raise DataError("entry %d (%r): %s" % (idx, entry.surface, exc)) from exc
        seqs.append((entry.surface, labels))
    return seqs


def log_likelihood_and_gradient(model: CrfModel, dataset: SegmentationDataset):
    """Regularized conditional log-likelihood and its gradient.

    Returns ``(ll, grad)`` with ``grad`` packed like ``model.packed()``:
    empirical minus expected feature counts, minus the l2 term.
    """
    nfeat = len(model.feat_index)
    grad_w = np.zeros((nfeat, 4))
    grad_t = np.zeros((4, 4))
    ll = 0.0
    for word, labels in _sequences(dataset):
        scores, feats = _emission_scores(model, word)
        n = len(word)
        lab_idx = [_L[l] for l in labels]

        gold = scores[np.arange(n), lab_idx].sum()
        gold += sum(model.trans[a, b] for a, b in zip(lab_idx, lab_idx[1:]))

        alpha, log_z = _forward(scores, model.trans)
        beta = _backward(scores, model.trans)
        ll += gold - log_z

        gamma = np.exp(alpha + beta - log_z)  # (n, 4) position marginals
        for i in range(n):
            for f in feats[i]:
                grad_w[f, lab_idx[i]] += 1.0
                grad_w[f] -= gamma[i]
        for i in range(n - 1):
            grad_t[lab_idx[i], lab_idx[i + 1]] += 1.0
            xi = (
                alpha[i][:, None]
                + model.trans
                + (scores[i + 1] + beta[i + 1])[None, :]
                - log_z
            )
            with np.errstate(invalid="ignore"):
                grad_t -= np.where(np.isneginf(xi), 0.0, np.exp(xi))

    packed = model.packed()
    ll -= 0.5 * model.l2 * float(packed @ packed)
    grad = np.concatenate(
        [grad_w.ravel(), np.asarray([grad_t[_L[a], _L[b]] for a, b in ALLOWED_PAIRS])]
    )
    grad -= model.l2 * packed
    return ll, grad


def train_crf(
    dataset: SegmentationDataset,
    delta: int = 3,
    l2: float = 0.01,
    max_iters: int = 200,
    tol: float = 1e-5,
    seed: int = 1917,
) -> CrfModel:
    """Fit the CRF by quasi-Newton ascent on the regularized likelihood.

    Only surface-mode data is supported: canonical analyses do not define a
    character labeling.  ``seed`` is reserved for randomized initialization
    schemes; the default zero initialization is already deterministic.
    """
    if dataset.mode != SURFACE:
        raise UnsupportedModeError(
            "CRF training requires surface-mode data, got %r" % (dataset.mode,)
        )
    feat_index: dict[tuple[int, str], int] = {}
    for entry in dataset.entries:
        for i in range(len(entry.surface)):
            for f in extract_features(entry.surface, i, delta):
                if f not in feat_index:
                    feat_index[f] = len(feat_index)
    model = CrfModel.zeros(delta, l2, feat_index)

    history: list[float] = []
    cache: dict[str, object] = {"vec": None, "ll": None}

    def objective(vec):
        model.set_packed(vec)
        ll, grad = log_likelihood_and_gradient(model, dataset)
        cache["vec"] = vec.copy()
        cache["ll"] = ll
        return -ll, -grad

    def record(vec):
        if cache["vec"] is not None and np.array_equal(cache["vec"], vec):
            history.append(cache["ll"])
            return
        model.set_packed(vec)
        ll, _ = log_likelihood_and_gradient(model, dataset)
        history.append(ll)

    result = minimize(
        objective,
        model.packed(),
        jac=True,
        method="L-BFGS-B",
        callback=record,
        options={"maxiter": max_iters, "gtol": tol, "ftol": 0.0},
    )
    model.set_packed(result.x)
    model.objective_history = history
    return model


def decode(model: CrfModel, word: str) -> SegmentedWord:
    """Viterbi decoding; among equal-scoring sequences the lexicographically
    first under B < E < M < S wins."""
    if not word:
        raise DataError("cannot decode an empty word")
    scores, _ = _emission_scores(model, word)
    n = len(word)
    # suffix-best values let reconstruction run front-to-back, which makes
    # the lexicographic tie-break exact
    suffix = np.empty((n, 4))
    suffix[-1] = scores[-1] + _FINAL_MASK
    for i in range(n - 2, -1, -1):
        suffix[i] = scores[i] + np.max(model.trans + suffix[i + 1][None, :], axis=1)

    labels = []
    prev = None
    for i in range(n):
        best_lab = None
        best_val = -np.inf
        for lab in LABELS:
            j = _L[lab]
            if i == 0:
                if lab not in START_LABELS:
                    continue
                val = suffix[0][j]
            else:
                if lab not in ALLOWED_NEXT[prev]:
                    continue
                val = model.trans[_L[prev], j] + suffix[i][j]
            if val > best_val:
                best_val = val
                best_lab = lab
        labels.append(best_lab)
        prev = best_lab
    return SegmentedWord(word, labels_to_morphs(word, labels), mode=SURFACE)


def viterbi_score(model: CrfModel, word: str, labels) -> float:
    """Score of one labeling; the brute-force oracle's counterpart."""
    scores, _ = _emission_scores(model, word)
    lab_idx = [_L[l] for l in labels]
    total = scores[np.arange(len(word)), lab_idx].sum()
    total += sum(model.trans[a, b] for a, b in zip(lab_idx, lab_idx[1:]))
    return float(total)


# -- model files -------------------------------------------------------------


def save_model(model: CrfModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("crf v1 %d %s\n" % (model.delta, repr(model.l2)))
        inv = sorted(model.feat_index.items(), key=lambda kv: kv[1])
        for (offset, content), idx in inv:
            for j, lab in enumerate(LABELS):
                w = model.weights[idx, j]
                if w != 0.0:
                    f.write("%d:%s\t%s\t%s\n" % (offset, content, lab, repr(float(w))))
        f.write("transitions:\n")
        for a, b in ALLOWED_PAIRS:
            f.write("%s\t%s\t%s\n" % (a, b, repr(float(model.trans[_L[a], _L[b]]))))


def load_model(path) -> CrfModel:
    from .errors import ParseError

    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith("crf v1 "):
        raise ParseError("%s: bad crf header" % (path,))
    head = lines[0].split(" ")
    delta = int(head[2])
    l2 = float(head[3])
    rows = []
    trans_rows = []
    section = "features"
    for i, line in enumerate(lines[1:], start=2):
        if line == "transitions:":
            section = "transitions"
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("%s: line %d: expected 3 fields" % (path, i))
        if section == "features":
            off_s, content = parts[0].split(":", 1)
            rows.append(((int(off_s), content), parts[1], float(parts[2])))
        else:
            trans_rows.append((parts[0], parts[1], float(parts[2])))
    feat_index: dict[tuple[int, str], int] = {}
    for feat, _, _ in rows:
        if feat not in feat_index:
            feat_index[feat] = len(feat_index)
    model = CrfModel.zeros(delta, l2, feat_index)
    for feat, lab, w in rows:
        model.weights[feat_index[feat], _L[lab]] = w
    for a, b, w in trans_rows:
        model.trans[_L[a], _L[b]] = w
    return model
