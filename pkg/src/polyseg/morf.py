"""Unsupervised morphological segmentation by description-length minimization.

Three variants share one lexicon model:

* ``baseline`` greedily re-splits word types, accepting only cost-lowering
  analyses, until an epoch improves the total code length by less than
  ``epsilon`` nats.
* ``lmvr`` trains on token counts instead of dampened types and enforces a
  hard cap on the effective lexicon size (character inventory plus active
  multi-character morphs).
* ``flatcat`` refines a trained baseline with an EM-trained hidden Markov
  model over morph categories (prefix / stem / suffix / non-morpheme) and
  re-segments through a joint split-and-category lattice.

The total cost is ``corpus_cost + alpha * lexicon_cost`` where the corpus
cost is the maximum-likelihood code length of the morph tokens and the
lexicon cost spells each lexicon entry with a uniform character model over
the alphabet plus an end-of-morph marker.  The lexicon-ordering correction
used by some description-length segmenters is deliberately omitted so the
cost is an exact, testable function of the lexicon state.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .errors import ConfigError, DataError, NumericError, ParseError

BASELINE = "baseline"
LMVR = "lmvr"
FLATCAT = "flatcat"

CATEGORIES = ("PRE", "STM", "SUF", "NON")
START_CATS = ("PRE", "STM")
FINAL_CATS = ("STM", "SUF")
ALLOWED_NEXT = {
    "PRE": ("PRE", "STM"),
    "STM": ("PRE", "STM", "SUF", "NON"),
    "SUF": ("PRE", "STM", "SUF", "NON"),
    "NON": ("PRE", "STM", "NON"),
}

_EPS_AFFINITY = 1e-3
_NEG_INF = float("-inf")


@dataclass
class CategoryModel:
    """HMM parameters over morph categories.

    ``start`` is a distribution over categories that may open a word and
    ``trans[c]`` one over the allowed successors of ``c``; word-final
    legality (stem or suffix) is structural and carries no probability.
    All values are natural-log probabilities; forbidden transitions are
    absent from the tables and read as -inf.
    """

    start: dict[str, float]
    trans: dict[str, dict[str, float]]
    emit: dict[str, dict[str, float]]

    def trans_logp(self, prev: str, nxt: str) -> float:
        return self.trans.get(prev, {}).get(nxt, _NEG_INF)

    def start_logp(self, cat: str) -> float:
        return self.start.get(cat, _NEG_INF)

    def emit_logp(self, cat: str, morph: str) -> float:
        return self.emit.get(cat, {}).get(morph, _NEG_INF)


@dataclass
class MorfModel:
    """Morph lexicon with counts, shared by all variants.

    ``lexicon`` maps each morph to its token count under the training
    segmentation; ``alphabet`` is the plain character inventory (the
    end-of-morph marker is accounted for as one extra uniform symbol).
    """

    lexicon: Counter
    alphabet: frozenset[str]
    alpha: float = 1.0
    variant: str = BASELINE
    max_lexicon_size: int | None = None
    categories: CategoryModel | None = None
    analyses: dict[str, tuple[str, ...]] = field(default_factory=dict)
    cost_history: list[float] = field(default_factory=list)
    ll_history: list[float] = field(default_factory=list)

    @property
    def total_tokens(self) -> int:
        return sum(self.lexicon.values())

    @classmethod
    def from_segmentations(
        cls,
        analyses: dict[str, tuple[str, ...]],
        word_counts: dict[str, int] | None = None,
        alpha: float = 1.0,
        variant: str = BASELINE,
    ) -> "MorfModel":
        """Build a model directly from fixed segmentations (tests, refinement)."""
        lexicon = Counter()
        for word, morphs in analyses.items():
            if "".join(morphs) != word:
                raise DataError("analysis %s does not spell %r" % (list(morphs), word))
            weight = 1 if word_counts is None else word_counts[word]
            for m in morphs:
                lexicon[m] += weight
        alphabet = frozenset(ch for word in analyses for ch in word)
        return cls(
            lexicon=lexicon,
            alphabet=alphabet,
            alpha=alpha,
            variant=variant,
            analyses=dict(analyses),
        )


@dataclass(frozen=True)
class MdlCost:
    corpus_cost: float
    lexicon_cost: float
    total: float


def mdl_cost(model: MorfModel) -> MdlCost:
    """Recompute the description length from the model state alone.

    Every lexicon entry pays its spelling cost, including entries whose
    count happens to be zero; only positive counts contribute corpus cost.
    """
    total_tokens = model.total_tokens
    corpus = 0.0
    if total_tokens > 0:
        log_total = math.log(total_tokens)
        corpus = sum(c * (log_total - math.log(c)) for c in model.lexicon.values() if c > 0)
    per_symbol = math.log(len(model.alphabet) + 1)
    lex = sum((len(m) + 1) * per_symbol for m in model.lexicon)
    return MdlCost(corpus_cost=corpus, lexicon_cost=lex, total=corpus + model.alpha * lex)


class _Trainer:
    """Greedy recursive-split trainer with incremental cost bookkeeping."""

    def __init__(self, word_counts, alpha, dampening, cap, seed, epsilon, init, max_epochs):
        if not word_counts:
            raise DataError("empty word counts")
        for w, c in word_counts.items():
            if not w or any(ch.isspace() for ch in w):
                raise DataError("bad word in counts: %r" % (w,))
            if c < 1:
                raise DataError("non-positive count for %r" % (w,))
        if dampening not in ("types", "tokens"):
            raise ConfigError("unknown dampening %r" % (dampening,))
        self.word_counts = dict(word_counts)
        self.alpha = alpha
        self.dampening = dampening
        self.alphabet = frozenset(ch for w in word_counts for ch in w)
        if cap is not None and cap < len(self.alphabet):
            raise ConfigError(
                "lexicon cap %d cannot cover the alphabet (%d characters)"
                % (cap, len(self.alphabet))
            )
        self.cap = cap
        self.epsilon = epsilon
        self.max_epochs = max_epochs
        self.rng = random.Random(seed)

        self._counts = Counter()
        self._total = 0
        self._sum_clogc = 0.0  # sum of count*log(count) over the lexicon
        self._lex_symbols = 0  # sum of (len(m)+1) over active morphs
        self._active_multichar = 0
        self._per_symbol = math.log(len(self.alphabet) + 1)
        self._analyses: dict[str, tuple[str, ...]] = {}
        self._init_analyses(init)
        self.cost_history = [self._tracked_total()]

    # -- incremental bookkeeping -------------------------------------------

    def _weight(self, word: str) -> int:
        return 1 if self.dampening == "types" else self.word_counts[word]

    def _add(self, morph: str, count: int) -> None:
        old = self._counts[morph]
        new = old + count
        self._counts[morph] = new
        if old > 0:
            self._sum_clogc -= old * math.log(old)
        else:
            self._lex_symbols += len(morph) + 1
            if len(morph) > 1:
                self._active_multichar += 1
        self._sum_clogc += new * math.log(new)
        self._total += count

    def _remove(self, morph: str, count: int) -> None:
        old = self._counts[morph]
        new = old - count
        if new < 0:
            raise NumericError("count of %r would go negative" % (morph,))
        self._sum_clogc -= old * math.log(old)
        if new > 0:
            self._counts[morph] = new
            self._sum_clogc += new * math.log(new)
        else:
            del self._counts[morph]
            self._lex_symbols -= len(morph) + 1
            if len(morph) > 1:
                self._active_multichar -= 1
        self._total -= count

    def _tracked_total(self) -> float:
        corpus = 0.0
        if self._total > 0:
            corpus = self._total * math.log(self._total) - self._sum_clogc
        return corpus + self.alpha * self._lex_symbols * self._per_symbol

    def _effective_size(self) -> int:
        return len(self.alphabet) + self._active_multichar

    def _within_cap(self) -> bool:
        return self.cap is None or self._effective_size() <= self.cap

    def _fits_if_added(self, morph: str) -> bool:
        if self.cap is None or len(morph) == 1 or self._counts[morph] > 0:
            return True
        return self._effective_size() + 1 <= self.cap

    def _check_sync(self) -> None:
        model = self._snapshot()
        recomputed = mdl_cost(model).total
        if abs(recomputed - self._tracked_total()) > 1e-6:
            raise NumericError(
                "tracked cost %.9f drifted from recomputed %.9f"
                % (self._tracked_total(), recomputed)
            )

    # -- initialization ----------------------------------------------------

    def _init_analyses(self, init: str) -> None:
        words = sorted(self.word_counts)
        if init == "words":
            plan = {w: (w,) for w in words}
        elif init == "chars":
            plan = {w: tuple(w) for w in words}
        elif init == "random":
            plan = {}
            for w in words:
                bounds = [i for i in range(1, len(w)) if self.rng.random() < 0.5]
                plan[w] = tuple(
                    w[a:b] for a, b in zip([0] + bounds, bounds + [len(w)])
                )
        else:
            raise ConfigError("unknown init %r" % (init,))
        self._install(plan)
        if not self._within_cap():
            # the requested start state busts the cap; characters always fit
            self._uninstall()
            self._install({w: tuple(w) for w in words})

    def _install(self, plan: dict[str, tuple[str, ...]]) -> None:
        for w, morphs in plan.items():
            weight = self._weight(w)
            for m in morphs:
                self._add(m, weight)
            self._analyses[w] = morphs

    def _uninstall(self) -> None:
        for w, morphs in self._analyses.items():
            weight = self._weight(w)
            for m in morphs:
                self._remove(m, weight)
        self._analyses.clear()

    # -- search ------------------------------------------------------------

    def _resegment(self, construction: str, weight: int) -> tuple[str, ...]:
        """Place ``construction`` (currently uncounted) back into the model,
        recursively choosing between keeping it whole and the best binary
        split; returns the committed morphs."""
        if len(construction) == 1:
            self._add(construction, weight)
            return (construction,)

        best_cost = math.inf
        best_i = None
        whole_ok = self._fits_if_added(construction)
        if whole_ok:
            self._add(construction, weight)
            best_cost = self._tracked_total()
            self._remove(construction, weight)

        fallback = []
        for i in range(1, len(construction)):
            left, right = construction[:i], construction[i:]
            self._add(left, weight)
            self._add(right, weight)
            cost = self._tracked_total()
            fits = self._within_cap()
            self._remove(left, weight)
            self._remove(right, weight)
            fallback.append((cost, i))
            if fits and cost < best_cost - 1e-12:
                best_cost = cost
                best_i = i

        if best_i is None:
            if whole_ok:
                self._add(construction, weight)
                return (construction,)
            # cap forbids both the whole construction and every admissible
            # split at this level: descend through the cheapest split and
            # let deeper levels fall back toward single characters.
            best_i = min(fallback)[1]

        left, right = construction[:best_i], construction[best_i:]
        self._add(left, weight)
        self._add(right, weight)
        self._remove(left, weight)
        lparts = self._resegment(left, weight)
        self._remove(right, weight)
        rparts = self._resegment(right, weight)
        return lparts + rparts

    def _visit(self, word: str) -> None:
        weight = self._weight(word)
        prev = self._analyses[word]
        prev_cost = self._tracked_total()
        for m in prev:
            self._remove(m, weight)
        result = self._resegment(word, weight)
        if self._tracked_total() > prev_cost + 1e-9 or not self._within_cap():
            for m in result:
                self._remove(m, weight)
            for m in prev:
                self._add(m, weight)
        else:
            self._analyses[word] = result
        if not self._within_cap():
            raise NumericError("lexicon cap violated after accepting a move")

    def train(self) -> None:
        words = sorted(self.word_counts)
        for _ in range(self.max_epochs):
            before = self._tracked_total()
            self.rng.shuffle(words)
            for w in words:
                self._visit(w)
            after = self._tracked_total()
            self._check_sync()
            self.cost_history.append(after)
            if before - after < self.epsilon:
                break

    def _snapshot(self) -> MorfModel:
        return MorfModel(
            lexicon=Counter(self._counts),
            alphabet=self.alphabet,
            alpha=self.alpha,
            variant=BASELINE,
            analyses=dict(self._analyses),
        )

    def finish(self, variant: str) -> MorfModel:
        model = self._snapshot()
        model.variant = variant
        model.max_lexicon_size = self.cap
        model.cost_history = list(self.cost_history)
        return model


def _train_restarts(factory, seed: int, restarts: int) -> MorfModel:
    """Run seeded restarts (seed, seed+1, ...) and keep the cheapest model;
    greedy accept-only-improving search depends on its start point, so a
    few restarts reliably find compositional optima single runs can miss."""
    if restarts < 1:
        raise ConfigError("restarts must be positive")
    best = None
    best_cost = math.inf
    for k in range(restarts):
        trainer = factory(seed + k)
        trainer.train()
        cost = trainer._tracked_total()
        if cost < best_cost - 1e-12:
            best_cost = cost
            best = trainer
    return best


def train_baseline(
    word_counts: dict[str, int],
    alpha: float = 1.0,
    seed: int = 1917,
    epsilon: float = 0.1,
    init: str = "random",
    max_epochs: int = 30,
    restarts: int = 1,
) -> MorfModel:
    """Train the baseline segmenter on word types (counts dampened to 1).

    ``init`` seeds the search: ``random`` scatters split points so shared
    substructure across types is discoverable (the all-whole-words start is
    a local optimum a strictly-improving search cannot leave), ``words``
    and ``chars`` start from whole words / single characters.
    """
    best = _train_restarts(
        lambda s: _Trainer(word_counts, alpha, "types", None, s, epsilon, init, max_epochs),
        seed,
        restarts,
    )
    return best.finish(BASELINE)


def train_lmvr(
    word_counts: dict[str, int],
    alpha: float = 1.0,
    max_lexicon_size: int | None = None,
    seed: int = 1917,
    epsilon: float = 0.1,
    init: str = "random",
    max_epochs: int = 30,
    dampening: str = "tokens",
    restarts: int = 1,
) -> MorfModel:
    """Train the lexicon-restricted variant.

    Token-count training raises the pressure to split frequent words; the
    cap bounds the effective lexicon (character inventory plus active
    multi-character morphs) after every accepted move, so a cap equal to
    the alphabet size forces single-character segmentation.
    """
    best = _train_restarts(
        lambda s: _Trainer(
            word_counts, alpha, dampening, max_lexicon_size, s, epsilon, init, max_epochs
        ),
        seed,
        restarts,
    )
    return best.finish(LMVR)


# -- inference ---------------------------------------------------------------


def _unseen_cost(model: MorfModel, morph: str, total: int) -> float:
    per_symbol = math.log(len(model.alphabet) + 1)
    return model.alpha * (len(morph) + 1) * per_symbol + math.log(total + 1)


def viterbi_segment(model: MorfModel, word: str) -> list[str]:
    """Split ``word`` into the cheapest morph sequence under the lexicon.

    Known morphs cost their negative log probability; unknown substrings
    pay the add-to-lexicon price (uniform-character spelling, corpus-weight
    scaled) plus a one-token smoothed corpus cost, so out-of-vocabulary
    words always segment.
    """
    if not word:
        raise DataError("cannot segment an empty word")
    if model.categories is not None:
        morphs, _ = viterbi_segment_with_categories(model, word)
        return morphs
    total = model.total_tokens
    log_total = math.log(total) if total > 0 else 0.0
    n = len(word)
    best = [math.inf] * (n + 1)
    back = [0] * (n + 1)
    best[0] = 0.0
    for end in range(1, n + 1):
        for start in range(end):
            if best[start] == math.inf:
                continue
            m = word[start:end]
            count = model.lexicon.get(m, 0)
            if count > 0:
                cost = log_total - math.log(count)
            else:
                cost = _unseen_cost(model, m, total)
            cand = best[start] + cost
            if cand < best[end]:
                best[end] = cand
                back[end] = start
    morphs = []
    pos = n
    while pos > 0:
        morphs.append(word[back[pos] : pos])
        pos = back[pos]
    morphs.reverse()
    return morphs


def viterbi_segment_with_categories(model: MorfModel, word: str) -> tuple[list[str], list[str]]:
    """Joint split-and-category decoding for category-model variants."""
    if model.categories is None:
        raise ConfigError("model has no category parameters")
    if not word:
        raise DataError("cannot segment an empty word")
    result = _viterbi_categories(model, word, strict=True)
    if result is None:
        # Every category-legal path died on zeroed emissions; let any
        # substring fall back to the add-to-lexicon cost instead.
        result = _viterbi_categories(model, word, strict=False)
    if result is None:
        raise NumericError("no legal category path for %r" % (word,))
    return result


def _viterbi_categories(model: MorfModel, word: str, strict: bool):
    cm = model.categories
    total = model.total_tokens
    known = set()
    for table in cm.emit.values():
        known.update(table)
    n = len(word)
    # state: (position, category of the morph ending there)
    best: list[dict[str, float]] = [dict() for _ in range(n + 1)]
    back: list[dict[str, tuple[int, str | None]]] = [dict() for _ in range(n + 1)]
    for end in range(1, n + 1):
        for start in range(end):
            m = word[start:end]
            for cat in CATEGORIES:
                logp = cm.emit_logp(cat, m)
                if logp == _NEG_INF:
                    if strict and m in known:
                        continue  # known morph, zero mass in this category
                    emit_cost = _unseen_cost(model, m, total)
                else:
                    emit_cost = -logp
                if start == 0:
                    slog = cm.start_logp(cat)
                    if slog == _NEG_INF:
                        continue
                    cand = -slog + emit_cost
                    prev_cat = None
                else:
                    cand = math.inf
                    prev_cat = None
                    for pc, pcost in best[start].items():
                        tlog = cm.trans_logp(pc, cat)
                        if tlog == _NEG_INF:
                            continue
                        c = pcost - tlog + emit_cost
                        if c < cand:
                            cand = c
                            prev_cat = pc
                    if prev_cat is None:
                        continue
                if cand < best[end].get(cat, math.inf):
                    best[end][cat] = cand
                    back[end][cat] = (start, prev_cat)
    finals = {c: v for c, v in best[n].items() if c in FINAL_CATS}
    if not finals:
        return None
    cat = min(finals, key=lambda c: (finals[c], c))
    morphs: list[str] = []
    cats: list[str] = []
    pos = n
    while pos > 0:
        start, prev_cat = back[pos][cat]
        morphs.append(word[start:pos])
        cats.append(cat)
        pos, cat = start, prev_cat
    morphs.reverse()
    cats.reverse()
    return morphs, cats


def segment_corpus(model: MorfModel, sentences) -> list[list[list[str]]]:
    """Segment every token of every sentence; concatenation restores tokens."""
    out = []
    for sent in sentences:
        tokens = sent.tokens if hasattr(sent, "tokens") else sent
        out.append([viterbi_segment(model, tok) for tok in tokens])
    return out


# -- category-model training -------------------------------------------------


def _logsumexp(values) -> float:
    m = max(values, default=_NEG_INF)
    if m == _NEG_INF:
        return _NEG_INF
    return m + math.log(sum(math.exp(v - m) for v in values))


def _initial_category_model(analyses, diversity_threshold: int) -> CategoryModel:
    left_ctx: dict[str, set] = {}
    right_ctx: dict[str, set] = {}
    counts = Counter()
    for word, morphs in analyses.items():
        for i, m in enumerate(morphs):
            counts[m] += 1
            if i > 0:
                left_ctx.setdefault(m, set()).add(morphs[i - 1])
            if i + 1 < len(morphs):
                right_ctx.setdefault(m, set()).add(morphs[i + 1])
    morph_list = sorted(counts)

    def affinity(m: str, cat: str) -> float:
        if cat == "PRE":
            div = len(right_ctx.get(m, ()))
            return float(div) if div >= diversity_threshold else _EPS_AFFINITY
        if cat == "SUF":
            div = len(left_ctx.get(m, ()))
            return float(div) if div >= diversity_threshold else _EPS_AFFINITY
        if cat == "STM":
            return float(len(m))
        return _EPS_AFFINITY

    emit = {}
    for cat in CATEGORIES:
        scores = {m: counts[m] * affinity(m, cat) for m in morph_list}
        z = sum(scores.values())
        emit[cat] = {m: math.log(s / z) for m, s in scores.items() if s > 0}
    start = {c: math.log(1.0 / len(START_CATS)) for c in START_CATS}
    trans = {
        c: {n: math.log(1.0 / len(ALLOWED_NEXT[c])) for n in ALLOWED_NEXT[c]}
        for c in CATEGORIES
    }
    return CategoryModel(start=start, trans=trans, emit=emit)


def _forward_backward(cm: CategoryModel, morphs: tuple[str, ...]):
    """Log-space forward/backward over categories for one morph sequence.

    Returns (log-likelihood, alphas, betas); the word-final mask restricts
    the last morph to stem or suffix.
    """
    n = len(morphs)
    first = {}
    for cat in CATEGORIES:
        if cat in START_CATS:
            first[cat] = cm.start_logp(cat) + cm.emit_logp(cat, morphs[0])
        else:
            first[cat] = _NEG_INF
    alphas = [first]
    for i in range(1, n):
        cur = {}
        for cat in CATEGORIES:
            e = cm.emit_logp(cat, morphs[i])
            if e == _NEG_INF:
                cur[cat] = _NEG_INF
                continue
            terms = [
                alphas[-1][pc] + cm.trans_logp(pc, cat)
                for pc in CATEGORIES
                if alphas[-1][pc] != _NEG_INF
            ]
            cur[cat] = _logsumexp(terms) + e if terms else _NEG_INF
        alphas.append(cur)
    ll = _logsumexp([alphas[-1][c] for c in FINAL_CATS])

    betas = [dict() for _ in range(n)]
    betas[-1] = {c: (0.0 if c in FINAL_CATS else _NEG_INF) for c in CATEGORIES}
    for i in range(n - 2, -1, -1):
        for cat in CATEGORIES:
            terms = []
            for nc in ALLOWED_NEXT.get(cat, ()):
                e = cm.emit_logp(nc, morphs[i + 1])
                b = betas[i + 1][nc]
                if e == _NEG_INF or b == _NEG_INF:
                    continue
                terms.append(cm.trans_logp(cat, nc) + e + b)
            betas[i][cat] = _logsumexp(terms) if terms else _NEG_INF
    return ll, alphas, betas


def train_flatcat(
    word_counts: dict[str, int],
    baseline_model: MorfModel,
    seed: int = 1917,
    epsilon: float = 1e-4,
    max_iters: int = 20,
    diversity_threshold: int = 3,
) -> MorfModel:
    """Refine a trained baseline with a category HMM and re-segment.

    Emissions start from context-diversity affinities (morphs preceded by
    many distinct morphs look suffix-like, followed by many look
    prefix-like, long morphs look stem-like), EM then fits the constrained
    HMM to the baseline segmentation; the data log-likelihood is
    non-decreasing per iteration.  The returned model re-segments words
    through the joint split-and-category lattice.
    """
    for w in word_counts:
        if w not in baseline_model.analyses:
            raise DataError("word %r missing from the baseline analyses" % (w,))
    analyses = {w: baseline_model.analyses[w] for w in sorted(word_counts)}
    cm = _initial_category_model(analyses, diversity_threshold)
    items = [(morphs, 1) for _, morphs in sorted(analyses.items())]

    ll_history = []
    for _ in range(max_iters):
        start_counts = Counter()
        trans_counts: dict[str, Counter] = {c: Counter() for c in CATEGORIES}
        emit_counts: dict[str, Counter] = {c: Counter() for c in CATEGORIES}
        total_ll = 0.0
        for morphs, weight in items:
            ll, alphas, betas = _forward_backward(cm, morphs)
            if ll == _NEG_INF:
                raise NumericError("zero-probability segmentation in EM")
            total_ll += weight * ll
            n = len(morphs)
            for i in range(n):
                for cat in CATEGORIES:
                    g = alphas[i][cat] + betas[i][cat] - ll
                    if g == _NEG_INF or g != g:
                        continue
                    p = weight * math.exp(g)
                    emit_counts[cat][morphs[i]] += p
                    if i == 0:
                        start_counts[cat] += p
            for i in range(n - 1):
                for pc in CATEGORIES:
                    if alphas[i][pc] == _NEG_INF:
                        continue
                    for nc in ALLOWED_NEXT[pc]:
                        e = cm.emit_logp(nc, morphs[i + 1])
                        b = betas[i + 1][nc]
                        if e == _NEG_INF or b == _NEG_INF:
                            continue
                        g = alphas[i][pc] + cm.trans_logp(pc, nc) + e + b - ll
                        trans_counts[pc][nc] += weight * math.exp(g)
        ll_history.append(total_ll)

        new_start = _normalize(start_counts, cm.start)
        new_trans = {c: _normalize(trans_counts[c], cm.trans[c]) for c in CATEGORIES}
        new_emit = {c: _normalize(emit_counts[c], cm.emit[c]) for c in CATEGORIES}
        cm = CategoryModel(start=new_start, trans=new_trans, emit=new_emit)
        if len(ll_history) >= 2 and ll_history[-1] - ll_history[-2] < epsilon:
            break

    refined = MorfModel(
        lexicon=Counter(),
        alphabet=baseline_model.alphabet,
        alpha=baseline_model.alpha,
        variant=FLATCAT,
        categories=cm,
    )
    # carry the baseline lexicon for unseen-cost scaling during the first
    # re-segmentation pass
    refined.lexicon = Counter(baseline_model.lexicon)
    new_analyses = {}
    new_lexicon = Counter()
    for w in sorted(word_counts):
        morphs, _ = viterbi_segment_with_categories(refined, w)
        new_analyses[w] = tuple(morphs)
        for m in morphs:
            new_lexicon[m] += 1
    refined.lexicon = new_lexicon
    refined.analyses = new_analyses
    refined.ll_history = ll_history
    return refined


def _normalize(counts: Counter, previous: dict[str, float]) -> dict[str, float]:
    z = sum(counts.values())
    if z <= 0:
        return dict(previous)
    # log-space division: v/z can underflow to 0.0 for denormal-scale counts
    log_z = math.log(z)
    return {k: math.log(v) - log_z for k, v in sorted(counts.items()) if v > 0}


# -- model files -------------------------------------------------------------


def save_model(model: MorfModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        head = "morf v1 %s %s" % (model.variant, repr(model.alpha))
        if model.max_lexicon_size is not None:
            head += " %d" % model.max_lexicon_size
        f.write(head + "\n")
        for morph in sorted(model.lexicon):
            f.write("%s\t%d\n" % (morph, model.lexicon[morph]))
        if model.categories is not None:
            cm = model.categories
            f.write("transitions:\n")
            for cat in START_CATS:
                if cat in cm.start:
                    f.write("<s>\t%s\t%s\n" % (cat, repr(cm.start[cat])))
            for prev in CATEGORIES:
                for nxt in sorted(cm.trans.get(prev, {})):
                    f.write("%s\t%s\t%s\n" % (prev, nxt, repr(cm.trans[prev][nxt])))
            f.write("emissions:\n")
            for cat in CATEGORIES:
                for morph in sorted(cm.emit.get(cat, {})):
                    f.write("%s\t%s\t%s\n" % (cat, morph, repr(cm.emit[cat][morph])))


def load_model(path) -> MorfModel:
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith("morf v1 "):
        raise ParseError("%s: bad morf header" % (path,))
    head = lines[0].split(" ")
    variant = head[2]
    alpha = float(head[3])
    cap = int(head[4]) if len(head) > 4 else None
    lexicon = Counter()
    start: dict[str, float] = {}
    trans: dict[str, dict[str, float]] = {}
    emit: dict[str, dict[str, float]] = {}
    section = "lexicon"
    for i, line in enumerate(lines[1:], start=2):
        if line == "transitions:":
            section = "transitions"
            continue
        if line == "emissions:":
            section = "emissions"
            continue
        parts = line.split("\t")
        if section == "lexicon":
            if len(parts) != 2:
                raise ParseError("%s: line %d: expected morph<TAB>count" % (path, i))
            lexicon[parts[0]] = int(parts[1])
        elif section == "transitions":
            if len(parts) != 3:
                raise ParseError("%s: line %d: expected 3 fields" % (path, i))
            src, dst, logp = parts[0], parts[1], float(parts[2])
            if src == "<s>":
                start[dst] = logp
            else:
                trans.setdefault(src, {})[dst] = logp
        else:
            if len(parts) != 3:
                raise ParseError("%s: line %d: expected 3 fields" % (path, i))
            emit.setdefault(parts[0], {})[parts[1]] = float(parts[2])
    categories = None
    if variant == FLATCAT:
        categories = CategoryModel(start=start, trans=trans, emit=emit)
    alphabet = frozenset(ch for m in lexicon for ch in m)
    return MorfModel(
        lexicon=lexicon,
        alphabet=alphabet,
        alpha=alpha,
        variant=variant,
        max_lexicon_size=cap,
        categories=categories,
    )
