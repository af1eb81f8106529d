"""Slack reports shared by all theorem checkers."""

from dataclasses import dataclass, field
import math

QUAD_TOL = 1e-7
EIG_TOL = 1e-8


@dataclass
class SlackReport:
    """One inequality check: ``slack = lhs - rhs`` and pass iff ``slack >= -tolerance``.

    An infinite ``lhs`` passes vacuously. ``chain`` holds the slacks of
    secondary inequalities proved alongside the main one (Pinsker steps and
    the like); :attr:`all_passed` also requires those.
    """

    theorem_id: str
    params: dict
    lhs: float
    rhs: float
    tolerance: float
    extras: dict = field(default_factory=dict)
    chain: dict = field(default_factory=dict)

    @property
    def slack(self):
        if math.isinf(self.lhs) and self.lhs > 0:
            return math.inf
        return self.lhs - self.rhs

    @property
    def passed(self):
        return self.slack >= -self.tolerance

    @property
    def min_slack(self):
        return min([self.slack, *self.chain.values()])

    @property
    def all_passed(self):
        return self.min_slack >= -self.tolerance

    @property
    def vacuous(self):
        return math.isinf(self.lhs)

    def to_dict(self):
        return {
            "theorem": self.theorem_id,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "chain": dict(self.chain),
            "extras": self.extras,
        }
