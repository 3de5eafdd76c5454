"""Python access to the finite game laboratory."""

import json

from . import _core

__all__ = ["GowersError", "run_scenario", "render_report", "instance_summary", "check_axioms", "solve"]


class GowersError(Exception):
    """A typed library error; `code` names the error kind and `detail` carries its witness data."""

    def __init__(self, payload):
        self.code = payload.get("error", "Error")
        self.detail = payload.get("detail", {})
        super().__init__(f"{self.code}: {payload.get('message', '')}")


def _call(fn, *args):
    try:
        return fn(*args)
    except RuntimeError as exc:
        try:
            payload = json.loads(str(exc))
        except ValueError:
            raise exc from None
        raise GowersError(payload) from None


def run_scenario(scenario, budget_nodes=None):
    """Run a scenario dict; returns (report, exit_code) like the command-line runner."""
    out = json.loads(_core.run_scenario(json.dumps(scenario), -1 if budget_nodes is None else int(budget_nodes)))
    return out["report"], out["exit_code"]


def render_report(report, fmt="table"):
    return _call(_core.render_report, json.dumps(report), fmt)


def instance_summary(spec):
    return json.loads(_call(_core.instance_summary, json.dumps(spec)))


def check_axioms(spec, horizon):
    return json.loads(_call(_core.check_axioms, json.dumps(spec), int(horizon)))


def solve(spec, kind, payoff, horizon, owner="I", root=0):
    """Solve the finite game `kind` on instance `spec` for `owner` aiming at `payoff`."""
    return json.loads(_call(_core.solve, json.dumps(spec), kind, json.dumps(payoff), int(horizon), owner, json.dumps(root)))
