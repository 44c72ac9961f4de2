"""Dual state, selection results, and the per-round run trace."""

import csv
from dataclasses import dataclass, field

import numpy as np

from ..errors import IngestionError, ParameterError


@dataclass
class DualState:
    """Per-teacher dual blocks plus the aggregated model-space vector.

    ``theta_tilde`` tracks ``(1/lam) * sum_ij alpha_ij z_ij`` incrementally;
    ``reals_up``/``reals_down`` count scalars shipped to and from the
    coordinator.
    """

    alpha: list  # one float array per teacher, local order
    theta_tilde: np.ndarray
    rounds_done: int = 0
    reals_up: int = 0
    reals_down: int = 0

    @property
    def K(self):
        return len(self.alpha)

    @property
    def d(self):
        return self.theta_tilde.shape[0]

    @property
    def n_total(self):
        return sum(block.shape[0] for block in self.alpha)

    def copy(self):
        return DualState(
            alpha=[block.copy() for block in self.alpha],
            theta_tilde=self.theta_tilde.copy(),
            rounds_done=self.rounds_done,
            reals_up=self.reals_up,
            reals_down=self.reals_down,
        )

    @classmethod
    def zeros(cls, block_sizes, d):
        return cls(
            alpha=[np.zeros(size) for size in block_sizes],
            theta_tilde=np.zeros(d),
        )


@dataclass(frozen=True)
class TraceRow:
    round_index: int
    objective: float
    risk: float | None
    reals_up: int
    reals_down: int


@dataclass
class RunTrace:
    """Objective / risk / communication record, one row per round."""

    rows: list = field(default_factory=list)

    def append(self, round_index, objective, risk, reals_up, reals_down):
        self.rows.append(TraceRow(round_index, objective, risk, reals_up, reals_down))

    def __len__(self):
        return len(self.rows)

    @property
    def objectives(self):
        return [row.objective for row in self.rows]

    @property
    def total_reals_up(self):
        return sum(row.reals_up for row in self.rows)

    @property
    def total_reals_down(self):
        return sum(row.reals_down for row in self.rows)

    def save_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "objective", "risk", "reals_up", "reals_down"])
            for row in self.rows:
                writer.writerow(
                    [
                        row.round_index,
                        repr(row.objective),
                        "" if row.risk is None else repr(row.risk),
                        row.reals_up,
                        row.reals_down,
                    ]
                )


@dataclass(frozen=True)
class SelectionResult:
    """Per-teacher selection masks under a global budget.

    ``global_ranking`` is a permutation of all global indices; the selected
    set is exactly its first ``budget`` entries.
    """

    masks: list  # one bool array per teacher, local order
    budget: int
    global_ranking: np.ndarray

    def selected_global(self):
        return self.global_ranking[: self.budget]

    def n_selected(self):
        return int(sum(int(mask.sum()) for mask in self.masks))


def save_state(state, path):
    """Text snapshot: header (K, d, sizes, round, tallies), then vectors."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"K={state.K} d={state.d} round={state.rounds_done} "
            f"reals_up={state.reals_up} reals_down={state.reals_down}\n"
        )
        fh.write("sizes=" + ",".join(str(b.shape[0]) for b in state.alpha) + "\n")
        fh.write("theta_tilde=" + _fmt(state.theta_tilde) + "\n")
        for i, block in enumerate(state.alpha):
            fh.write(f"alpha{i}=" + _fmt(block) + "\n")


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    try:
        header = dict(part.split("=") for part in lines[0].split())
        K = int(header["K"])
        sizes = [int(s) for s in lines[1].split("=", 1)[1].split(",")]
        theta_tilde = _parse(lines[2].split("=", 1)[1])
        alpha = [_parse(lines[3 + i].split("=", 1)[1]) for i in range(K)]
    except (IndexError, KeyError, ValueError) as exc:
        raise IngestionError(f"{path}: malformed state snapshot ({exc})") from None
    if [b.shape[0] for b in alpha] != sizes:
        raise IngestionError(f"{path}: snapshot block sizes do not match header")
    state = DualState(
        alpha=alpha,
        theta_tilde=theta_tilde,
        rounds_done=int(header["round"]),
        reals_up=int(header["reals_up"]),
        reals_down=int(header["reals_down"]),
    )
    if state.d != int(header["d"]):
        raise ParameterError(f"{path}: snapshot dimension mismatch")
    return state


def _fmt(vec):
    return ",".join(repr(float(v)) for v in vec)


def _parse(text):
    if not text:
        return np.zeros(0)
    return np.array([float(tok) for tok in text.split(",")])
