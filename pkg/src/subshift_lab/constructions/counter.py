"""Counter machines and the bouncing-ball cone rendering.

A machine step may move several counters by one and is selected by the
current state together with the zero pattern of the counters; transitions
may be nondeterministic.  The cone picture, scheme "cone-1": the input row
``1^l 2^k`` extends right of the origin and upward as stripes, the
computation cone widens by one cell per row right of the input, a ball
zig-zags inside it (two columns per row rightward, one horizontal return
row), and one machine step is applied at each return row.  The machine
state is a stripe on column 0 and each counter value v is a run of v
symbols growing leftward in its own column band, so rows between return
rows are vertically constant away from the ball.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import InputError, SimulationError
from .base import render_window

SCHEME_VERSION = "cone-1"


@dataclass(frozen=True, slots=True)
class CounterMachineSpec:
    states: tuple
    counters: tuple
    initial: str
    transitions: tuple  # (state, zero_flags, deltas, next_state)


def make_machine(states, counters, initial, transitions):
    states = tuple(str(s) for s in states)
    counters = tuple(str(c) for c in counters)
    if len(set(states)) != len(states) or not states:
        raise InputError("bad state set")
    if len(set(counters)) != len(counters):
        raise InputError("bad counter set")
    if initial not in states:
        raise InputError("initial state not declared")
    rules = []
    for (state, flags, deltas, nxt) in transitions:
        flags = tuple(bool(f) for f in flags)
        deltas = tuple(int(d) for d in deltas)
        if state not in states or nxt not in states:
            raise InputError("transition mentions unknown state")
        if len(flags) != len(counters) or len(deltas) != len(counters):
            raise InputError("transition arity mismatch")
        if any(d not in (-1, 0, 1) for d in deltas):
            raise InputError("counter deltas must be -1, 0 or 1")
        if any(d == -1 and z for d, z in zip(deltas, flags)):
            raise InputError("decrement under a zero flag")
        rules.append((state, flags, deltas, nxt))
    return CounterMachineSpec(states, counters, initial, tuple(rules))


def machine_to_json(m):
    return json.dumps({
        "states": list(m.states),
        "counters": list(m.counters),
        "initial": m.initial,
        "transitions": [
            {"state": s, "zero": list(z), "deltas": list(d), "next": n}
            for (s, z, d, n) in m.transitions
        ],
    })


def machine_from_json(text):
    try:
        data = json.loads(text)
        return make_machine(
            data["states"], data["counters"], data["initial"],
            [(t["state"], t["zero"], t["deltas"], t["next"])
             for t in data["transitions"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad machine JSON: %s" % exc) from exc


def cm_step(m, state, values):
    """Successor configurations; the empty tuple means halt/reject."""
    values = tuple(int(v) for v in values)
    if len(values) != len(m.counters) or any(v < 0 for v in values):
        raise InputError("bad counter values")
    flags = tuple(v == 0 for v in values)
    out = set()
    for (s, z, d, n) in m.transitions:
        if s != state or z != flags:
            continue
        nv = tuple(v + dv for v, dv in zip(values, d))
        if any(v < 0 for v in nv):
            continue  # excluded branch, not an error
        out.add((n, nv))
    return tuple(sorted(out))


def trivial_machine():
    """Single looping state, no counters."""
    return make_machine(["loop"], [], "loop", [("loop", (), (), "loop")])


def doubling_machine():
    """Two-counter doubler: each pump/return cycle doubles counter 'c'."""
    T = [  # (state, (c==0, d==0), (dc, dd), next)
        ("pump", (False, True), (-1, 1), "fill"),
        ("pump", (False, False), (-1, 1), "fill"),
        ("fill", (True, False), (0, 1), "pump"),
        ("fill", (False, False), (0, 1), "pump"),
        ("fill", (True, True), (0, 1), "pump"),
        ("fill", (False, True), (0, 1), "pump"),
        ("pump", (True, False), (0, 0), "back"),
        ("back", (True, False), (1, -1), "back"),
        ("back", (False, False), (1, -1), "back"),
        ("back", (False, True), (0, 0), "pump"),
    ]
    return make_machine(["pump", "fill", "back"], ["c", "d"], "pump", T)


def guess_loop_machine(num_guesses):
    """Nondeterministic skeleton that pumps each guess counter for a while
    and at some point moves on; the final state loops forever.

    The predicate that would judge the guesses is outside this scope; the
    caller inspects the trace instead.
    """
    if num_guesses < 1:
        raise InputError("need at least one guess counter")
    counters = ["n%d" % i for i in range(1, num_guesses + 1)]
    states = ["g%d" % i for i in range(1, num_guesses + 1)] + ["run"]
    rules = []
    for i in range(1, num_guesses + 1):
        state = "g%d" % i
        nxt = "g%d" % (i + 1) if i < num_guesses else "run"
        for flags in _all_flags(num_guesses):
            deltas = [0] * num_guesses
            deltas[i - 1] = 1
            rules.append((state, flags, tuple(deltas), state))
            rules.append((state, flags, (0,) * num_guesses, nxt))
    for flags in _all_flags(num_guesses):
        rules.append(("run", flags, (0,) * num_guesses, "run"))
    return make_machine(states, counters, "g1", rules)


def _all_flags(n):
    out = [()]
    for _ in range(n):
        out = [f + (b,) for f in out for b in (False, True)]
    return out


def run_guess_loop(num_guesses, sweeps, choices, predicate):
    """Drive a guess_loop_machine and judge the guessed values externally.

    ``predicate`` receives the tuple of guess-counter values after the
    machine settles in its run state; evaluating the (decidable) predicate
    outside keeps arbitrary checks out of the machine itself.
    """
    m = guess_loop_machine(num_guesses)
    trace = _simulate(m, 0, 0, sweeps, tuple(choices))
    state, values = trace[-1]
    if state != "run":
        raise SimulationError("guessing did not finish within the sweeps")
    return bool(predicate(values))


# ---------------------------------------------------------------------------
# Cone rendering


def _simulate(m, l, k, sweeps, choices):
    values = [0] * len(m.counters)
    for i, v in enumerate((l, k)[:len(m.counters)]):
        values[i] = v
    trace = [(m.initial, tuple(values))]
    used = 0  # choices are consumed at nondeterministic branches only
    for t in range(sweeps):
        succ = cm_step(m, trace[-1][0], trace[-1][1])
        if not succ:
            raise SimulationError("machine rejected at sweep %d" % (t + 1))
        if len(succ) == 1:
            pick = succ[0]
        else:
            if used >= len(choices):
                raise SimulationError(
                    "nondeterministic branch at sweep %d needs a choice" % (t + 1))
            if not 0 <= choices[used] < len(succ):
                raise SimulationError("choice %d out of range at sweep %d"
                                      % (choices[used], t + 1))
            pick = succ[choices[used]]
            used += 1
        trace.append(pick)
    return trace


def update_rows(sweeps):
    """Return rows y where the ball completes its sweeps: y_t = 2^(t+1) - 2."""
    rows = []
    y = 0
    for _ in range(sweeps):
        y = 2 * (y + 1)
        rows.append(y)
    return rows


def cone_render(m, l, k, sweeps, choices=()):
    """Window of the cone picture for input (l, k) over ``sweeps`` sweeps.

    Raises SimulationError when the machine rejects or an unresolved
    nondeterministic branch lacks a choice.
    """
    if l < 0 or k < 0 or sweeps < 1:
        raise InputError("need l, k >= 0 and sweeps >= 1")
    trace = _simulate(m, l, k, sweeps, tuple(choices))
    rows = update_rows(sweeps)
    height = rows[-1] + 2
    caps = [max(2, max(v[i] for (_, v) in trace) + 1)
            for i in range(len(m.counters))]
    band_right = []
    right = -1
    for cap in caps:
        band_right.append(right)
        right -= cap + 1
    x_lo = right  # leftmost rendered column
    cone_left = l + k + 1

    def config_at(y):
        t = 0
        for (i, row) in enumerate(rows):
            if y >= row:
                t = i + 1
        return trace[t]

    def cell(x, y):
        if y < 0:
            return "0"
        state, values = config_at(y)
        if x == 0:
            return "S:" + state
        if 1 <= x <= l:
            return "1"
        if l < x <= l + k:
            return "2"
        if x < 0:
            for i, rgt in enumerate(band_right):
                if rgt - values[i] < x <= rgt:
                    return "C:" + m.counters[i]
            return "0"
        # cone area
        dx = x - cone_left
        if dx > y or dx < 0:
            return "0"
        if dx == y:
            return "E"
        # ball track
        prev = 0
        for row in rows:
            if y == row:
                return "B"
            if prev < y < row and dx == 2 * (y - prev - 1):
                return "B"
            if y < row:
                break
            prev = row
        return "C"

    params = (("l", l), ("k", k), ("sweeps", sweeps),
              ("choices", ",".join(str(c) for c in choices)))
    return render_window("cone", params, SCHEME_VERSION, cell,
                         x_lo, 0, cone_left + height + 2 - x_lo, height)


def read_cone_trace(m, window, sweeps):
    """Recover (state, counters) at row 0 and each update row from the cells.

    Independent readback used to verify the rendering against cm_step: the
    state is parsed off column 0 and each counter value is the number of
    cells carrying its symbol in the row.
    """
    p = window.window
    x0, y0 = p.origin
    rows = [0] + [r for r in update_rows(sweeps) if r < y0 + p.height]
    out = []
    for y in rows:
        sym = p.get(0, y)
        state = sym[2:] if sym.startswith("S:") else None
        values = tuple(
            sum(1 for x in range(x0, 0) if p.get(x, y) == "C:" + c)
            for c in m.counters)
        out.append((state, values))
    return out
