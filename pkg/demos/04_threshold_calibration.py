"""
Turning scores into decisions
=============================

Pair scores only become paraphrase judgements once a threshold is
chosen.  The threshold is tuned on a development set by scanning every
value where the decision can change, then applied to the test set.
This demo also shows the stratified split helper and the lexical
overlap report used to characterise datasets.
"""

import numpy as np

from spanalign import (
    DEFAULT_SPLIT_SEED,
    LabeledScore,
    evaluate,
    find_optimal_threshold,
    jaccard_unigram,
    overlap_report,
    stratified_dev_split,
)

rng = np.random.default_rng(42)

# Synthetic scores: paraphrases centred a little above non-paraphrases,
# with heavy class overlap so the threshold actually matters.
def sample(n, gold, centre):
    return [
        LabeledScore(pair_id=f"{gold}{i}", score=float(rng.normal(centre, 0.25)),
                     gold=gold)
        for i in range(n)
    ]

population = sample(300, "positive", 0.55) + sample(500, "negative", 0.30)

# Hold out 20% as a dev set, stratified so both classes keep their
# share.  The seeded split is reproducible run to run.
train, dev = stratified_dev_split(
    population,
    [s.gold for s in population],
    fraction=0.2,
    seed=DEFAULT_SPLIT_SEED,
)
print(f"split: {len(train)} train, {len(dev)} dev")
print(f"dev positives: {sum(1 for s in dev if s.gold == 'positive')}")

for metric in ("f1_pos", "accuracy"):
    threshold = find_optimal_threshold(dev, metric)
    report = evaluate(train, threshold)
    print(f"\ntuned for {metric}: threshold {threshold.value:.4f}")
    print(f"  f1_pos={report.f1_pos:.4f} accuracy={report.accuracy:.4f} "
          f"recall_neg={report.recall_neg:.4f}")
    print(f"  counts tp={report.tp} fp={report.fp} tn={report.tn} fn={report.fn}")

# Lexical overlap: unigram Jaccard between the two sides of each pair,
# reported per class.  Adversarial datasets sit near 100 on both.
print("\njaccard('a b c', 'b c d') =", jaccard_unigram("a b c", "b c d"))

texts_a = ["the deal closed on friday", "prices rose sharply last week",
           "the deal closed on friday"]
texts_b = ["the deal closed on friday", "last week prices rose sharply",
           "he sold the car yesterday"]
golds = ["positive", "positive", "negative"]
report = overlap_report(texts_a, texts_b, golds)
print(f"overlap: positive={report.positive:.2f}% "
      f"negative={report.negative:.2f}% overall={report.overall:.2f}%")
