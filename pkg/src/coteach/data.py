"""Data model, synthetic generation, CSV ingestion, sharding, and targets.

A :class:`Dataset` is an immutable ``(X, y, task)`` triple; teachers see
:class:`TeacherShard` views carrying the mapping from local to global
indices.  All generators are pure functions of their parameters and seed:
the same call yields bit-identical arrays.
"""

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import IngestionError, NumericError, ParameterError
from .losses import LOGISTIC, SQUARED

CLASSIFICATION = "classification"
REGRESSION = "regression"
TASKS = (CLASSIFICATION, REGRESSION)

# Synthetic geometry defaults: cluster centers are drawn from a unit
# isotropic normal, points scatter around them, and regression targets get
# a small additive noise.  All three are overridable per call.
CENTER_SCALE = 1.0
CLUSTER_STD = 0.3
REGRESSION_NOISE_STD = 0.1


def validate_task(task):
    if task not in TASKS:
        raise ParameterError(f"unknown task {task!r}; expected one of {TASKS}")


def loss_kind_for_task(task):
    validate_task(task)
    return LOGISTIC if task == CLASSIFICATION else SQUARED


class Example(NamedTuple):
    features: np.ndarray
    label: float


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled dataset with a fixed feature dimension."""

    X: np.ndarray
    y: np.ndarray
    task: str

    def __post_init__(self):
        validate_task(self.task)
        X = np.ascontiguousarray(self.X, dtype=float)
        y = np.ascontiguousarray(self.y, dtype=float)
        if X.ndim != 2:
            raise ParameterError(f"feature matrix must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise ParameterError(
                f"label vector shape {y.shape} does not match {X.shape[0]} rows"
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ParameterError("dataset contains non-finite values")
        if self.task == CLASSIFICATION and y.size and not np.all(np.abs(y) == 1.0):
            raise ParameterError("classification labels must be exactly +1 or -1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> Example:
        return Example(self.X[i], float(self.y[i]))

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.X[indices], self.y[indices], self.task)


@dataclass(frozen=True)
class TeacherShard:
    """One teacher's private slice of a dataset."""

    teacher_id: int
    X: np.ndarray
    y: np.ndarray
    task: str
    global_indices: np.ndarray  # local index -> global index

    def __post_init__(self):
        gi = np.ascontiguousarray(self.global_indices, dtype=np.int64)
        gi.setflags(write=False)
        object.__setattr__(self, "global_indices", gi)
        if gi.shape != (self.X.shape[0],):
            raise ParameterError("global index map does not match shard size")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class TeachingGoal:
    """Target model plus the provenance of how it was perturbed."""

    theta_star: np.ndarray
    theta_gt: np.ndarray
    noise_ratio: float


def _cluster_counts(total, n_clusters):
    base, extra = divmod(total, n_clusters)
    return [base + 1 if c < extra else base for c in range(n_clusters)]


def gen_synthetic(
    task,
    n,
    d,
    clusters=4,
    seed=0,
    *,
    center_scale=CENTER_SCALE,
    cluster_std=CLUSTER_STD,
    noise_std=REGRESSION_NOISE_STD,
):
    """Generate ``n`` examples in ``d`` dimensions from ``clusters`` normal blobs.

    Classification: clusters are split evenly between the +1 and -1 classes,
    so labels are exactly balanced (``n`` and ``clusters`` must be even).
    Regression: targets come from a random linear model on the features plus
    ``noise_std`` normal noise.
    """
    validate_task(task)
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    if clusters < 2 or n < clusters:
        raise ParameterError(f"need n >= clusters >= 2, got n={n}, clusters={clusters}")
    if task == CLASSIFICATION and (clusters % 2 or n % 2):
        raise ParameterError(
            "classification requires even n and even clusters for exact class balance"
        )
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, center_scale, size=(clusters, d))
    if task == CLASSIFICATION:
        half = clusters // 2
        counts = _cluster_counts(n // 2, half) + _cluster_counts(n // 2, half)
        labels = [1.0] * half + [-1.0] * half
    else:
        counts = _cluster_counts(n, clusters)
        labels = [0.0] * clusters
    X_parts, y_parts = [], []
    for c, (count, label) in enumerate(zip(counts, labels)):
        pts = centers[c] + rng.normal(0.0, cluster_std, size=(count, d))
        X_parts.append(pts)
        y_parts.append(np.full(count, label))
    X = np.concatenate(X_parts)
    if task == CLASSIFICATION:
        y = np.concatenate(y_parts)
    else:
        coef = rng.normal(0.0, 1.0, size=d)
        y = X @ coef + rng.normal(0.0, noise_std, size=n)
    return Dataset(X, y, task)


def load_csv(path, task, label_column, *, remap01=False):
    """Read a headered CSV into a :class:`Dataset`.

    Features are all non-label columns in header order.  With ``remap01``
    classification labels 0/1 are remapped to -1/+1; the remap is never
    applied silently.  Errors cite the 1-based file line of the offending
    row.
    """
    validate_task(task)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: empty file, expected a header row") from None
        if label_column not in header:
            raise IngestionError(
                f"{path}: label column {label_column!r} not found in header {header}"
            )
        label_idx = header.index(label_column)
        arity = len(header)
        rows, labels = [], []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != arity:
                raise IngestionError(
                    f"{path}: row {line_no} has {len(row)} cells, expected {arity}"
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                bad = next(c for c in row if not _is_float(c))
                raise IngestionError(
                    f"{path}: row {line_no} has non-numeric cell {bad!r}"
                ) from None
            label = values.pop(label_idx)
            if task == CLASSIFICATION:
                if remap01 and label in (0.0, 1.0):
                    label = 1.0 if label == 1.0 else -1.0
                if label not in (1.0, -1.0):
                    raise IngestionError(
                        f"{path}: row {line_no} label {label:g} is not +1/-1"
                        + ("" if remap01 else " (use the 0/1 remap flag?)")
                    )
            rows.append(values)
            labels.append(label)
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    return Dataset(np.array(rows, dtype=float), np.array(labels, dtype=float), task)


def _is_float(cell):
    try:
        float(cell)
        return True
    except ValueError:
        return False


def save_csv(dataset, path, *, seed=None):
    """Write a dataset as CSV plus a ``<path>.meta`` key=value sidecar."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(dataset.d)] + ["label"])
        for i in range(dataset.n):
            writer.writerow(
                [repr(float(v)) for v in dataset.X[i]] + [repr(float(dataset.y[i]))]
            )
    meta = {"task": dataset.task, "n": dataset.n, "d": dataset.d}
    if seed is not None:
        meta["seed"] = seed
    with open(f"{path}.meta", "w", encoding="utf-8") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def read_meta(path):
    """Parse a ``key=value`` sidecar written by :func:`save_csv`."""
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and "=" in line:
                key, value = line.split("=", 1)
                meta[key] = value
    return meta


def shard(dataset, K, seed):
    """Split a dataset into ``K`` disjoint, exhaustive teacher shards.

    A seeded uniform permutation is cut into contiguous runs; the first
    ``N mod K`` shards take one extra example so nothing is dropped.
    """
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    if K > dataset.n:
        raise ParameterError(f"K={K} exceeds dataset size {dataset.n}")
    perm = np.random.default_rng(seed).permutation(dataset.n)
    base, extra = divmod(dataset.n, K)
    shards = []
    start = 0
    for i in range(K):
        size = base + (1 if i < extra else 0)
        idx = perm[start : start + size]
        start += size
        shards.append(
            TeacherShard(
                teacher_id=i,
                X=dataset.X[idx],
                y=dataset.y[idx],
                task=dataset.task,
                global_indices=idx,
            )
        )
    return shards


def make_target(dataset, lam, noise_ratio, seed, *, tol=1e-8, max_iter=100):
    """Fit the full-data model and perturb it into a teaching target.

    The perturbation is isotropic normal noise rescaled to
    ``noise_ratio * ||theta_gt||``, so the relative displacement of the
    target from the fit equals ``noise_ratio`` exactly.
    """
    from .learner import fit_primal  # deferred: learner imports losses only

    if dataset.n == 0:
        raise ParameterError("cannot build a target from an empty dataset")
    if noise_ratio < 0:
        raise ParameterError(f"noise_ratio must be >= 0, got {noise_ratio}")
    kind = loss_kind_for_task(dataset.task)
    theta_gt = fit_primal(kind, dataset.X, dataset.y, lam, tol=tol, max_iter=max_iter)
    if not np.all(np.isfinite(theta_gt)):
        raise NumericError("full-data fit produced non-finite parameters")
    if noise_ratio == 0.0:
        tau = np.zeros_like(theta_gt)
    else:
        direction = np.random.default_rng(seed).normal(size=theta_gt.shape)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            raise NumericError("degenerate noise draw")
        tau = direction * (noise_ratio * np.linalg.norm(theta_gt) / norm)
    return TeachingGoal(
        theta_star=theta_gt + tau, theta_gt=theta_gt, noise_ratio=float(noise_ratio)
    )


def save_goal(goal, path, *, lam=None, seed=None):
    """Write a teaching goal as a key=value text file (exact round-trip)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("theta_star=" + ",".join(repr(float(v)) for v in goal.theta_star) + "\n")
        fh.write("theta_gt=" + ",".join(repr(float(v)) for v in goal.theta_gt) + "\n")
        fh.write(f"noise_ratio={goal.noise_ratio!r}\n")
        if lam is not None:
            fh.write(f"lambda={lam!r}\n")
        if seed is not None:
            fh.write(f"seed={seed}\n")


def load_goal(path):
    meta = read_meta(path)
    try:
        return TeachingGoal(
            theta_star=np.array([float(v) for v in meta["theta_star"].split(",")]),
            theta_gt=np.array([float(v) for v in meta["theta_gt"].split(",")]),
            noise_ratio=float(meta["noise_ratio"]),
        )
    except (KeyError, ValueError) as exc:
        raise IngestionError(f"{path}: malformed goal file ({exc})") from None
