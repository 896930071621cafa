# End-to-end preprocessing pipeline through the CLI entry point.
#
# train -> segment -> desegment -> UNK analysis, all via the same
# subcommands a shell pipeline would use.  Segmenting then desegmenting
# restores the corpus byte for byte, which is the contract MT
# preprocessing relies on.

import tempfile
from pathlib import Path

from polyseg.cli import main

root = Path(tempfile.mkdtemp())
corpus = root / "corpus.txt"
corpus.write_text(
    "nekuxiri tewime kuxi\nnekuxi tewiri\nkuxime nekuxiri tewime\n", encoding="utf-8"
)

model = root / "model.bpe"
segged = root / "segmented.txt"
restored = root / "restored.txt"
vocab = root / "vocab.txt"

assert main(["train", "--method", "bpe", "--vocab-size", "30",
             "--input", str(corpus), "--model", str(model)]) == 0
assert main(["segment", "--model", str(model), "--input", str(corpus),
             "--output", str(segged)]) == 0
print("segmented corpus:")
print(segged.read_text(encoding="utf-8"))

assert main(["desegment", "--model", str(model), "--input", str(segged),
             "--output", str(restored)]) == 0
print("round trip byte-identical:", restored.read_bytes() == corpus.read_bytes())

# UNK analysis against the model's own piece vocabulary
from polyseg.bpe import load_model

vocab.write_text("\n".join(sorted(load_model(model).vocab)) + "\n", encoding="utf-8")
assert main(["analyze", "unk", "--vocab", str(vocab), "--input", str(segged),
             "--system", "bpe-demo", "--out", str(root / "unk.csv")]) == 0
print((root / "unk.csv").read_text(encoding="utf-8"))
