"""Two hands-free ways to select the sentiment dimension.

1. Lexicon selection: overlap each dimension's feature lists with a
   positive/negative word list; the best-matching eigenvector wins and the
   winning pairing even fixes which cluster is POSITIVE.
2. Domain adaptation: overlap the lists with a sentiment profile selected
   by a human in another domain. High similarity scores and wide gaps
   between winner and runner-up signal a trustworthy transfer.
"""

from dimminer import adapt_select, build_corpus, eig_similarity, lexicon_select
from dimminer.pipeline import PipelineConfig, decompose, profiles_for
from dimminer.synth import make_two_factor_corpus

config = PipelineConfig()

source_domain = make_two_factor_corpus(seed=26)
source_corpus = build_corpus(source_domain.documents)
_, _, source_basis = decompose(source_corpus, config)
source_profiles = profiles_for(source_corpus, source_basis, config)

# --- lexicon route -------------------------------------------------------
lexicon = source_domain.lexicon()
selection, polarity = lexicon_select(source_profiles, lexicon)
print("lexicon selection")
print(f"  winner e_{selection.eig_index}: score {selection.score}, "
      f"runner-up {selection.second_best_score}, gap {selection.gap}")
print(f"  polarity fixed by the winning pairing: {polarity}")

scores = [
    (p.eig_index, eig_similarity((lexicon.positive, lexicon.negative), p.lists()))
    for p in source_profiles
]
print("  all scores:", ", ".join(f"e_{i}={s}" for i, s in scores))

# --- adaptation route ----------------------------------------------------
# A second domain: disjoint topic vocabulary, same sentiment words.
target_domain = make_two_factor_corpus(
    seed=27,
    topic_prefixes=("topc", "topd"),
    sentiment_pools=source_domain.sentiment_pools,
    noise_pool=source_domain.noise_pool,
    id_prefix="tgt",
)
target_corpus = build_corpus(target_domain.documents)
_, _, target_basis = decompose(target_corpus, config)
target_profiles = profiles_for(target_corpus, target_basis, config)

source_sentiment = next(p for p in source_profiles if p.eig_index == selection.eig_index)
adapted = adapt_select(source_sentiment, target_profiles)
print("\ndomain adaptation")
print(f"  source: e_{source_sentiment.eig_index} of the first domain")
print(f"  winner in target domain: e_{adapted.eig_index} "
      f"(score {adapted.score}, gap {adapted.gap})")
print("  rule of thumb from the evaluation: scores >= 14 and gaps >= 5")
print("  mark a transfer trustworthy; scores <= 6 or gaps <= 1 do not.")
