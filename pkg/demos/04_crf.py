# Supervised segmentation with a character-tagging CRF.
#
# Characters carry BMES labels; transitions are hard-constrained to
# well-formed sequences, so decoded morphs always concatenate back to the
# word.  Features are windowed character substrings keyed by offset.

from polyseg import SegmentationDataset, SegmentedWord, crf_decode, extract_features, train_crf
from polyseg.corpus import SURFACE

pairs = [
    ("nekuxiri", ("ne", "kuxi", "ri")),
    ("nekuxi", ("ne", "kuxi")),
    ("tewime", ("tewi", "me")),
    ("tewiri", ("tewi", "ri")),
    ("kuxime", ("kuxi", "me")),
]
train = SegmentationDataset(
    tuple(SegmentedWord(s, m) for s, m in pairs), mode=SURFACE
)

print("features at position 2 of 'nekuxi' (radius 2):")
for feat in extract_features("nekuxi", 2, delta=2):
    print("  offset %+d: %r" % feat)

model = train_crf(train, delta=2, l2=0.01, max_iters=120)
print("likelihood per iteration:", [round(v, 3) for v in model.objective_history[:6]], "...")

for word in ("nekuxime", "tewi", "kuxiri"):
    print("%-9s -> %s" % (word, "+".join(crf_decode(model, word).morphs)))
