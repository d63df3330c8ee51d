"""Smoke test for the tweetlens Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install crates/python`, then run `python python/smoke_test.py`.
"""

import json
import math

import tweetlens


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    toks = tweetlens.tokenize("The quick car drives quickly #SelfDrivingCars http://t.co/x")
    check([t["kind"] for t in toks][-2:] == ["HASHTAG", "URL"], "tokenizer kinds")
    check([t["pos"] for t in toks][:5] == ["OTHER", "ADJ", "NOUN", "VERB", "ADV"], "POS tags")
    check(tweetlens.stem("driving") == "drive", "porter stem")
    check(tweetlens.count_emphatics("This is REALLY cool!!!") == 2, "emphatic count")
    check(tweetlens.classify_hashtag("#fail") == -1, "hashtag polarity")

    check(
        tweetlens.top_tfidf_unigrams([["cool", "car"], ["cool", "ride"], ["bad", "car"]], 2) == ["bad", "ride"],
        "tf-idf ranking",
    )
    ig = tweetlens.information_gain([1, 1, 0, 0, 0, 0], [0, 0, 0, 1, 1, 1])
    check(abs(ig - 0.4591) < 1e-4, "information gain")

    m = tweetlens.compute_metrics([[2, 0], [1, 1]])
    check(m["accuracy"] == 0.75 and abs(m["weighted"]["recall"] - 0.75) < 1e-12, "metrics")

    folds = tweetlens.stratified_folds([0] * 45 + [1] * 5, 5, 3)
    check(sorted(i for f in folds for i in f) == list(range(50)), "folds partition rows")

    docs = [[f"a{i % 5}" for i in range(d, d + 8)] for d in range(20)]
    docs += [[f"b{i % 5}" for i in range(d, d + 8)] for d in range(20)]
    lda = tweetlens.LdaModel(docs, k=2, alpha=0.5, iters=50, seed=2)
    check(all(math.isclose(sum(row), 1.0, abs_tol=1e-9) for row in lda.phi()), "phi rows stochastic")
    tops = [{w[0] for w in lda.top_words(k, 5)} for k in range(2)]
    check(all(len({w[0] for w in t}) == 1 for t in tops), "topics separate vocabularies")
    check(json.loads(json.dumps(lda.export(3)))["K"] == 2, "topic export")

    xor = [[0, 0], [0, 1], [1, 0], [1, 1]]
    rf = tweetlens.RandomForest(xor, [0, 1, 1, 0], n_trees=1, m_try_rule="all", bootstrap=False)
    check(rf.predict_batch(xor) == [0, 1, 1, 0], "single tree shatters xor")
    check(tweetlens.RandomForest.from_json(rf.to_json()).predict([1, 1]) == 0, "forest json round trip")

    corpus = tweetlens.Corpus.from_csv_text(tweetlens.synthetic_csv(300, seed=4))
    check(len(corpus) == 300 and corpus.stats()["total"] == 300, "corpus load and stats")
    names, rows, labels, classes = corpus.features("LM", hashtag_min_freq=5)
    check(names[:2] == ["ling:noun", "ling:verb"] and len(rows) == 300, "feature matrix")

    try:
        tweetlens.stratified_folds([0, 1], 5)
    except tweetlens.TweetlensError:
        print("ok   errors raise TweetlensError")
    else:
        raise SystemExit("FAIL: expected TweetlensError")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
