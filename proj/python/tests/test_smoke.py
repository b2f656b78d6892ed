# Copyright 2026 The diffcoref Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import math

import numpy as np
import pytest

import diffcoref as dc


def test_exact_metrics_on_fixture():
    gold = dc.Clustering.from_one_based([[1, 2, 3], [4, 5]])
    sys = dc.Clustering.from_one_based([[1, 2], [3, 4, 5]])
    b3 = dc.b_cubed(gold, sys)
    assert b3.recall == pytest.approx(b3.precision)
    assert 0.0 < b3.f1 < 1.0
    assert dc.muc(gold, gold).f1 == 1.0
    assert dc.lea(gold, gold).f1 == 1.0
    report = dc.metric_report(gold, sys)
    expected = (report["muc"]["f1"] + report["b3"]["f1"] +
                report["ceaf_e"]["f1"]) / 3
    assert report["conll"] == pytest.approx(expected)


def test_conll_average():
    assert dc.conll_average(0.7322, 0.6144, 0.5774) == pytest.approx(
        0.6413, abs=1e-4)


def test_clustering_rejects_non_partition():
    with pytest.raises(dc.InputError):
        dc.Clustering(3, [[0, 1]])


def test_membership_three_mentions():
    p = np.array([[1.0, 0.0, 0.0],
                  [0.6, 0.4, 0.0],
                  [0.5, 0.3, 0.2]])
    q = dc.membership(p)
    assert q[2] == pytest.approx([0.68, 0.12, 0.20])
    assert np.allclose(q.sum(axis=1), 1.0)
    assert np.allclose(q, dc.brute_force_membership(p), atol=1e-12)


def test_invalid_distribution_raises():
    with pytest.raises(dc.InvalidDistributionError):
        dc.membership(np.array([[0.5, 0.0], [0.5, 0.5]]))


def test_tempered_membership_sharpens():
    p = np.array([[1.0, 0.0, 0.0],
                  [0.6, 0.4, 0.0],
                  [0.5, 0.3, 0.2]])
    qt = dc.tempered_membership(dc.membership(p), 0.1)
    assert qt[2, 0] > 0.99
    with pytest.raises(dc.DomainError):
        dc.tempered_membership(dc.membership(p), 0.0)


def test_relaxed_equals_exact_on_one_hot():
    a = [0, 0, 2, 1, 2]
    sys = dc.antecedents_to_clusters(a)
    q = np.zeros((5, 5))
    for i, c in enumerate([0, 0, 2, 0, 2]):
        q[i, c] = 1.0
    gold = dc.Clustering.from_one_based([[1, 2], [3, 4, 5]])
    f, prec, rec = dc.relaxed_score("b3", q, gold)
    exact = dc.b_cubed(gold, sys)
    assert f == pytest.approx(exact.f1)
    assert prec == pytest.approx(exact.precision)
    assert rec == pytest.approx(exact.recall)
    f, _, _ = dc.relaxed_score("lea", q, gold)
    assert f == pytest.approx(dc.lea(gold, sys).f1)


def test_generate_is_deterministic():
    a = dc.generate_synthetic(num_docs=3, seed=7)
    b = dc.generate_synthetic(num_docs=3, seed=7)
    assert len(a) == 3
    for x, y in zip(a, b):
        assert np.array_equal(x.mention_features, y.mention_features)
        assert x.gold_clusters == y.gold_clusters
        assert x.pair_features.shape == (x.size * (x.size - 1) // 2,
                                         x.pair_dim)
    with pytest.raises(dc.ConfigError):
        dc.generate_synthetic(type_signal=(1.0, 0.0, 1.0))


def test_corpus_and_model_round_trip(tmp_path):
    docs = dc.generate_synthetic(num_docs=2, seed=3)
    path = str(tmp_path / "c.jsonl")
    dc.save_corpus(docs, path)
    back = dc.load_corpus(path)
    assert [d.id for d in back] == [d.id for d in docs]
    params = dc.ModelParams.random(10, 16, 4, 5, scale=0.2, seed=9)
    mpath = str(tmp_path / "m.txt")
    dc.save_model(params, mpath)
    assert dc.load_model(mpath) == params


@pytest.mark.parametrize("kind", ["mr-heuristic", "ec-heuristic", "b3", "lea"])
def test_gradients_match_finite_differences(kind):
    doc = dc.generate_synthetic(num_docs=1, min_mentions=6, max_mentions=6,
                                seed=11)[0]
    params = dc.ModelParams.random(10, 16, 4, 5, scale=0.5, seed=2)
    loss, grad = dc.loss_with_grad(doc, params, kind)
    assert loss == pytest.approx(dc.loss(doc, params, kind))
    assert grad.shape == (params.size,)
    assert dc.grad_check(doc, params, kind) < 1e-5


def test_grad_check_step_bounds():
    doc = dc.generate_synthetic(num_docs=1, seed=1)[0]
    params = dc.ModelParams.random(10, 16, 4, 5)
    with pytest.raises(dc.ConfigError):
        dc.grad_check(doc, params, h=1e-2)


def test_train_improves_dev():
    docs = dc.generate_synthetic(num_docs=24, seed=5)
    train, dev = docs[:18], docs[18:]
    init = dc.ModelParams.random(10, 16, 8, 8, scale=0.1, seed=1)
    before = dc.evaluate(dev, init)["conll"]
    params, history, best = dc.train(train, dev, epochs=4, hidden_mention=8,
                                     hidden_pair=8, init=init)
    assert len(history) == 4
    assert 1 <= best <= 4
    assert all(math.isfinite(h["loss"]) for h in history)
    assert dc.evaluate(dev, params)["conll"] >= before
    a = dc.predict(dev[0], params)
    assert all(0 <= x <= i for i, x in enumerate(a))
    counts = dc.error_breakdown(dev[0], a)
    assert counts["total"]["correct"] + counts["total"]["wrong_link"] + \
        counts["total"]["false_new"] + counts["total"]["false_anaphor"] == \
        dev[0].size


def test_adagrad_step_in_place():
    theta = np.array([1.0, 2.0])
    accum = np.zeros(2)
    dc.adagrad_step(theta, np.array([0.5, 0.0]), accum, 0.1, 0.0)
    assert theta == pytest.approx([0.9, 2.0])
    assert accum == pytest.approx([0.25, 0.0])


def test_beta_grid():
    assert len(dc.BETA_GRID) == 8
    assert dc.BETA_GRID[1] == 1.0
