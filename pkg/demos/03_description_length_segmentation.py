# Description-length segmentation: baseline, lexicon cap, categories.
#
# The baseline trainer balances a corpus code against a lexicon code; on
# a compositional toy corpus it discovers the shared bigram morphs.  The
# capped variant restricts the effective lexicon; the category variant
# fits a PRE/STM/SUF/NON hidden Markov model on top of the baseline and
# re-segments jointly.

from polyseg import (
    mdl_cost,
    train_baseline,
    train_flatcat,
    train_lmvr,
    viterbi_segment,
)
from polyseg.morf import MorfModel, viterbi_segment_with_categories

word_counts = {"taka": 5, "tasu": 5, "mika": 5, "misu": 5}

model = train_baseline(word_counts, seed=1917, restarts=16)
print("per-epoch total cost:", [round(c, 3) for c in model.cost_history])
cost = mdl_cost(model)
print("corpus %.3f + lexicon %.3f = %.3f nats" % (cost.corpus_cost, cost.lexicon_cost, cost.total))
for w in ("taka", "mitasu", "sumi"):
    print("%-8s -> %s" % (w, "+".join(viterbi_segment(model, w))))

# a cap equal to the character inventory leaves no room for real morphs
capped = train_lmvr(word_counts, max_lexicon_size=len(model.alphabet), seed=2)
print("capped at |alphabet|:", "+".join(capped.analyses["taka"]))

# category refinement on an affixing toy
analyses = {
    "replay": ("re", "play"),
    "redo": ("re", "do"),
    "player": ("play", "er"),
    "doer": ("do", "er"),
}
base = MorfModel.from_segmentations(analyses)
refined = train_flatcat({w: 1 for w in analyses}, base, diversity_threshold=2)
morphs, cats = viterbi_segment_with_categories(refined, "redoer")
print("redoer ->", " ".join("%s/%s" % (m, c) for m, c in zip(morphs, cats)))
