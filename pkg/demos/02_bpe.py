# Byte-pair subword model -- learn merges, segment, invert.
#
# The trainer repeatedly merges the most frequent adjacent symbol pair
# (ties break lexicographically, so runs are reproducible).  Every word
# ends in a marker-bearing symbol, which is what makes decoding exact.

from collections import Counter

from polyseg import bpe_decode, bpe_encode, train_bpe

corpus = Counter({"nekuxiri": 6, "nekuxi": 4, "tewime": 5, "tewiri": 3, "kuxime": 2})

model = train_bpe(corpus, target_vocab_size=24)
print("alphabet+merges vocab size:", len(model.vocab))
print("merges in application order:")
for a, b in model.merges:
    print("   %s + %s -> %s" % (a, b, a + b))

for word in ("nekuxiri", "tewime", "nekuxime", "zaza"):
    pieces = bpe_encode(model, word)
    flags = ["?" if model.is_unknown(p) else "" for p in pieces]
    shown = " ".join(p + f for p, f in zip(pieces, flags))
    assert bpe_decode(pieces) == word
    print("%-10s -> %s" % (word, shown))
print("round trip holds for every word above ('?' marks unknown pieces)")
