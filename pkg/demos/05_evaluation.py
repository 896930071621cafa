# Evaluation: segmentation F1 variants, MT metrics, significance.
#
# Two F1 readings ship side by side -- boundary F1 over split positions
# and matching F1 over optimally aligned morph types -- plus BLEU and chrF
# with reference-implementation semantics and their signature strings,
# and a paired sign-flip randomization test for system comparison.

from polyseg import (
    SegmentationDataset,
    SegmentedWord,
    bleu,
    boundary_f1,
    chrf,
    emma_f1,
    paired_randomization_test,
)
from polyseg.corpus import SURFACE
from polyseg.metrics import significance_mark


def dataset(pairs):
    return SegmentationDataset(
        tuple(SegmentedWord(s, tuple(m)) for s, m in pairs), mode=SURFACE
    )


gold = dataset([("nekuxiri", ("ne", "kuxi", "ri")), ("tewime", ("tewi", "me"))])
pred = dataset([("nekuxiri", ("ne", "kuxiri")), ("tewime", ("tewi", "me"))])

b = boundary_f1(pred, gold)
e = emma_f1(pred, gold)
print("boundary-f1: P=%.3f R=%.3f F1=%.3f acc=%.2f" % (b.precision, b.recall, b.f1, b.accuracy))
print("emma-f1:     P=%.3f R=%.3f F1=%.3f acc=%.2f" % (e.precision, e.recall, e.f1, e.accuracy))

refs = ["el perro corre mucho", "yo miro la casa", "ellos cantan bien hoy"]
system_a = ["el perro corre mucho", "yo miro una casa", "ellos cantan bien hoy"]
system_b = ["el gato corre", "yo miro la casa", "ellas cantan mal hoy"]

for name, hyp in (("A", system_a), ("B", system_b)):
    rb = bleu(hyp, refs)
    rc = chrf(hyp, refs)
    print("system %s: BLEU %.2f  chrF %.2f   [%s | %s]"
          % (name, rb.score, rc.score, rb.signature, rc.signature))

p = paired_randomization_test(system_a, system_b, refs, metric="chrf", trials=10000, seed=1917)
print("paired randomization p = %.4f (%s)" % (p, significance_mark(p)))
