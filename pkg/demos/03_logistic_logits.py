# %% [markdown]
# # Logits from a reweighted logistic model, through files
#
# For a network with a sigmoid output, the statistic is the pre-sigmoid
# logit. Here a logistic model stands in for the network. The training set
# is imbalanced roughly 1:3, so the loss weights each label-0 sample by
# N2/N and each label-1 sample by N1/N.
#
# The second half goes through the same files the CLI uses: a score CSV and
# a calibration snapshot.

# %%
from pathlib import Path

import numpy as np

from dualtest import io as dio
from dualtest.empirical import split_by_label
from dualtest.metrics import evaluate
from dualtest.neural import WeightedBceSpec, sample_weight, train_logistic
from dualtest.testing import TestConfig, calibrate, decide_batch

rng = np.random.default_rng(0)


def make(n0, n1):
    x0 = rng.normal([-1.0, 0.5], 1.0, (n0, 2))
    x1 = rng.normal([1.2, -0.3], 1.0, (n1, 2))
    return np.vstack([x0, x1]), np.r_[np.zeros(n0, int), np.ones(n1, int)]


x_train, y_train = make(1349, 3883)
x_test, y_test = make(234, 390)
spec = WeightedBceSpec.from_labels(y_train)
print("weights: label 0 ->", round(sample_weight(0, spec), 4), " label 1 ->", round(sample_weight(1, spec), 4))

model, history = train_logistic(x_train, y_train, spec, lr=1e-4, epochs=500)
print(f"loss {history[0]:.1f} -> {history[-1]:.1f}")

# %%
out = Path("demo_output/logistic")
out.mkdir(parents=True, exist_ok=True)
dio.write_scores(out / "train_scores.csv", model.logits(x_train), y_train)
dio.write_scores(out / "test_scores.csv", model.logits(x_test), y_test)

table = dio.read_score_table(out / "train_scores.csv")
d1, d2 = split_by_label(table.scores, table.labels)
for alpha in (0.01, 0.025, 0.05):
    tester = calibrate(d1, d2, TestConfig.symmetric(alpha))
    snap = dio.CalibrationSnapshot.from_tester(tester, (d1.count, d2.count), "logistic demo")
    dio.write_snapshot(snap, out / f"snapshot_{alpha}.txt")

    test = dio.read_score_table(out / "test_scores.csv")
    loaded = dio.read_snapshot(out / f"snapshot_{alpha}.txt").tester()
    rep = evaluate(decide_batch(test.scores, loaded), test.labels.tolist(), positive_class=1)
    print(f"alpha {100 * alpha:.1f}%: coverage {rep.coverage:.3f} accuracy {rep.accuracy:.3f} "
          f"recall {rep.recall:.3f} precision {rep.precision:.3f} specificity {rep.specificity:.3f}")

# %% [markdown]
# The same calibration from the shell:
#
#     dualtest calibrate --scores demo_output/logistic/train_scores.csv --snapshot snap.txt --alpha 0.025
#     dualtest evaluate  --scores demo_output/logistic/test_scores.csv --snapshot snap.txt
#     dualtest decide    --scores demo_output/logistic/test_scores.csv --snapshot snap.txt
