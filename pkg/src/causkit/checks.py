"""Signalling-structure checks and the causal-type membership dispatcher.

Everything here reduces to one primitive.  To say that a process ``K`` is
independent of some of its inputs means ``K = K' (x) discard`` on those
inputs; ``K'`` is recovered by plugging the uniform causal state (uniform
distribution / maximally mixed state / full relation) into them, and the
residual is the largest entrywise deviation between ``K`` and the
reconstruction ``K' (x) discard``.

On top of that primitive:

* ``check_one_way``: causal, and the first event's marginal ignores the
  second event's input.
* ``check_nonsignalling``: causal, and no single event signals to the rest.
* ``check_comb``: causal, and peeling events off the back one at a time
  leaves marginals independent of the peeled input.
* ``check_order_consistency``: causal, and no set of events signals into a
  down-closed subset of a given partial order.
* ``check_via_totalisations``: the same property checked instead as "is a
  comb for every linear extension" (the two agree; see the tests).
* ``check_soc``: plugging every member of a spanning family of causal
  channels into the marked slots always leaves a causal process.

``check_membership`` maps a causal type to whichever of these applies.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from . import backends, core
from .backends import CheckReport, _scale
from .core import DEFAULT_TOL, Process
from .errors import (
    CombinatorialBlowup,
    EmbedMismatch,
    NoSuchWire,
    ShapeMismatch,
    TooManyEvents,
    UnsupportedType,
)
from .events import Event, EventPoset, check_partition
from .typesys import (
    Atom,
    Cap,
    Dual,
    Lolli,
    Par,
    Tensor,
    Type,
    Unit,
    atom_occurrences,
    fo_embedding,
    is_first_order,
    normalize,
    parse_type,
    render_type,
)


# -- the independence primitive -------------------------------------------------


def _extract(p: Process, in_labels: Sequence[str]) -> Process:
    """Plug the uniform causal state into the given inputs."""
    if not in_labels:
        return p
    systems = tuple(p.wire(l) for l in in_labels)
    st = backends.uniform_state(p.backend, systems)
    return core.plug(st, p, [(l, l) for l in in_labels])


def _independence_residual(p: Process, in_labels: Sequence[str]) -> tuple[float, Process]:
    """Residual of ``p = p' (x) discard`` on ``in_labels``, and that ``p'``."""
    if not in_labels:
        return 0.0, p
    extracted = _extract(p, in_labels)
    disc = backends.discard(p.backend, tuple(p.wire(l) for l in in_labels))
    recon = core.tensor_par(extracted, disc)
    recon = core.permute(
        recon, [w.label for w in p.out_wires], [w.label for w in p.in_wires]
    )
    return core.distance(recon, p), extracted


# -- pairwise and multipartite signalling ----------------------------------------


def check_one_way(p: Process, first: Event, second: Event, tol: float = DEFAULT_TOL) -> CheckReport:
    """Is ``p`` causal and signalling at most from ``first`` to ``second``?

    Concretely: discarding the outputs of ``second`` must leave a process
    independent of the inputs of ``second``.
    """
    check_partition([first, second], p)
    causal = backends.is_causal(p, tol)
    marg = core.discard_outputs(p, second.outs)
    residual, _ = _independence_residual(marg, second.ins)
    worst = max(causal.residual, residual)
    ok = causal.passed and residual <= tol * _scale(p)
    detail = "" if ok else (
        causal.detail or f"input of {second.name!r} influences the marginal of {first.name!r}"
    )
    return CheckReport(ok, worst, tol, detail)


def check_nonsignalling(p: Process, events: Sequence[Event], tol: float = DEFAULT_TOL) -> CheckReport:
    """Is ``p`` causal with no event signalling to the others?

    For each event, discarding its outputs must leave a process independent
    of its inputs.  Single-event conditions imply the subset-wise ones, since
    inputs can be switched one event at a time.
    """
    check_partition(events, p)
    causal = backends.is_causal(p, tol)
    worst = causal.residual
    bad = "" if causal.passed else (causal.detail or "not causal")
    for e in events:
        marg = core.discard_outputs(p, e.outs)
        residual, _ = _independence_residual(marg, e.ins)
        worst = max(worst, residual)
        if residual > tol * _scale(p) and not bad:
            bad = f"event {e.name!r} signals to the rest"
    return CheckReport(not bad, worst, tol, bad)


def check_comb(p: Process, events: Sequence[Event], tol: float = DEFAULT_TOL) -> CheckReport:
    """Is ``p`` a comb with the given events in the given temporal order?

    The last event's output is discarded; the marginal must not depend on
    its input; the process with that event peeled off (uniform state plugged
    in) must recursively be a comb on the remaining events.
    """
    check_partition(events, p)
    causal = backends.is_causal(p, tol)
    worst = causal.residual
    bad = "" if causal.passed else (causal.detail or "not causal")
    scale = _scale(p)
    q = p
    for k in range(len(events) - 1, 0, -1):
        last = events[k]
        marg = core.discard_outputs(q, last.outs)
        residual, q = _independence_residual(marg, last.ins)
        worst = max(worst, residual)
        if residual > tol * scale and not bad:
            bad = f"event {last.name!r} signals backwards to {[e.name for e in events[:k]]}"
    return CheckReport(not bad, worst, tol, bad)


# -- arbitrary acyclic orders -----------------------------------------------------


def check_order_consistency(
    p: Process, poset: EventPoset, tol: float = DEFAULT_TOL, max_events: int = 12
) -> CheckReport:
    """Is ``p`` causal and compatible with the partial order?

    For every down-closed subset ``S`` of events, discarding the outputs of
    the events outside ``S`` must leave a process independent of their
    inputs: nothing outside a completed past can signal into it.
    """
    if len(poset) > max_events:
        raise TooManyEvents(
            f"{len(poset)} events would need up to 2**{len(poset)} marginal checks"
        )
    check_partition(poset.events, p)
    causal = backends.is_causal(p, tol)
    worst = causal.residual
    bad = "" if causal.passed else (causal.detail or "not causal")
    scale = _scale(p)
    all_names = set(poset.names)
    for sub in poset.down_closed_subsets():
        comp = all_names - sub
        if not comp:
            continue
        outs = [l for n in comp for l in poset.event(n).outs]
        ins = [l for n in comp for l in poset.event(n).ins]
        marg = core.discard_outputs(p, outs)
        residual, _ = _independence_residual(marg, ins)
        worst = max(worst, residual)
        if residual > tol * scale and not bad:
            bad = f"events {sorted(comp)} signal into the down-closed set {sorted(sub)}"
    return CheckReport(not bad, worst, tol, bad)


def check_via_totalisations(
    p: Process, poset: EventPoset, tol: float = DEFAULT_TOL, max_events: int = 8
) -> CheckReport:
    """Order consistency checked the expensive way: ``p`` must be a comb for
    every linear extension of the partial order.  Agrees with
    :func:`check_order_consistency` and serves as its oracle in the tests.
    """
    if len(poset) > max_events:
        raise TooManyEvents(
            f"{len(poset)} events can have up to {len(poset)}! linear extensions"
        )
    check_partition(poset.events, p)
    worst = 0.0
    bad = ""
    for ext in poset.linear_extensions():
        rep = check_comb(p, [poset.event(n) for n in ext], tol)
        worst = max(worst, rep.residual)
        if not rep.passed and not bad:
            bad = f"not a comb for the extension {ext}: {rep.detail}"
    return CheckReport(not bad, worst, tol, bad)


# -- second-order causal processes ------------------------------------------------


def check_soc(
    p: Process,
    parties: Sequence[Event],
    tol: float = DEFAULT_TOL,
    budget: int = 20000,
) -> CheckReport:
    """Does ``p`` send every tuple of causal party channels to a causal process?

    Each party event names the wires of ``p`` feeding that party (``outs`` of
    ``p``, the party's input) and the wires receiving the party's output
    (``ins`` of ``p``).  Every combination drawn from per-party spanning
    families (deterministic functions, or an affine basis of channels for
    cpm) is plugged in; since plugging is affine per slot — monotone for rel
    — this decides the quantification over all causal channels.
    """
    families = []
    total = 1
    for e in parties:
        outs = tuple(p.wire(l) for l in e.ins)
        ins = tuple(p.wire(l) for l in e.outs)
        total *= backends.channel_family_size(p.backend, outs, ins)
        if total > budget:
            raise CombinatorialBlowup(
                f"spanning the parties needs more than {budget} channel tuples"
            )
        families.append(backends.causal_channel_family(p.backend, outs, ins))

    worst = 0.0
    bad = ""
    for combo in itertools.product(*families):
        q = p
        for e, chan in zip(parties, combo):
            pairs = [(l, l) for l in e.outs] + [(l, l) for l in e.ins]
            q = core.plug(q, chan, pairs)
        rep = backends.is_causal(q, tol)
        worst = max(worst, rep.residual)
        if not rep.passed and not bad:
            bad = "a tuple of causal party channels leaves a non-causal remainder"
    return CheckReport(not bad, worst, tol, bad)


# -- membership in a causal type ---------------------------------------------------


def _split_labels(t: Type) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(input labels, output labels) of a normalized type, in order."""
    ins, outs = [], []
    for atom, dualled in atom_occurrences(t):
        (ins if dualled else outs).append(atom.label)
    return tuple(ins), tuple(outs)


def _check_wires(p: Process, t: Type) -> None:
    """The type's atoms must be exactly the process wires, with dual
    occurrences naming inputs and plain ones naming outputs."""
    emb = fo_embedding(t)
    want_in = {a.label: a.dim for a in emb.in_atoms}
    want_out = {a.label: a.dim for a in emb.out_atoms}
    have_in = {w.label: w.dim for w in p.in_wires}
    have_out = {w.label: w.dim for w in p.out_wires}
    for want, have, side in ((want_in, have_in, "input"), (want_out, have_out, "output")):
        for label, dim in want.items():
            if label not in have:
                other = "output" if side == "input" else "input"
                if label in (have_out if side == "input" else have_in):
                    raise EmbedMismatch(
                        f"type uses {label!r} as an {side} but the process has it as an {other}"
                    )
                raise NoSuchWire(f"type mentions {side} wire {label!r} which the process lacks")
            if dim is not None and dim != have[label]:
                raise ShapeMismatch(
                    f"wire {label!r} has dimension {have[label]}, type says {dim}"
                )
        for label in have:
            if label not in want:
                raise NoSuchWire(f"process wire {label!r} does not appear in the type")


def _comb_seq(t: Type) -> list[Type] | None:
    """Flatten ``G -o (M -o H)`` nests into ``[G, .., H]``; None if not comb-shaped."""
    if not isinstance(t, Lolli):
        return None
    if not is_first_order(t.left):
        return None
    if is_first_order(t.right):
        return [t.left, t.right]
    if isinstance(t.right, Lolli):
        inner = _comb_seq(t.right.left)
        if inner is not None and is_first_order(t.right.right):
            return [t.left] + inner + [t.right.right]
    return None


def _fo_labels(t: Type) -> tuple[str, ...]:
    return tuple(a.label for a, _ in atom_occurrences(normalize(t)))


def _is_arrow(t: Type) -> bool:
    return isinstance(t, Lolli) and is_first_order(t.left) and is_first_order(t.right)


def _party_events(t: Type) -> list[Event] | None:
    """Events for the factors of a tensor of arrows, from the host's side:
    an arrow party ``A -o A'`` occupies host outputs ``A`` and host inputs
    ``A'``; a bare first-order factor is a party that only receives."""
    factors = t.parts if isinstance(t, Tensor) else (t,)
    events = []
    for k, f in enumerate(factors):
        if _is_arrow(f):
            events.append(Event(f"party{k}", ins=_fo_labels(f.right), outs=_fo_labels(f.left)))
        elif is_first_order(f):
            events.append(Event(f"party{k}", ins=_fo_labels(f), outs=()))
        else:
            return None
    return events


def _soc_parties(t: Type) -> list[Event] | None:
    """Match ``T -o H`` or ``G -o (T -o H)`` with ``T`` a tensor of arrows."""

    def tail_ok(h: Type) -> bool:
        return is_first_order(h) or _is_arrow(h)

    if not isinstance(t, Lolli):
        return None
    if not is_first_order(t.left):
        parties = _party_events(t.left)
        if parties is not None and tail_ok(t.right):
            return parties
        return None
    if isinstance(t.right, Lolli) and not is_first_order(t.right.left):
        parties = _party_events(t.right.left)
        if parties is not None and tail_ok(t.right.right):
            return parties
    return None


def _causal_shape(n: Type) -> bool:
    """Normalized pars of dualled atoms and first-order pieces are channel
    types up to currying, and membership is plain causality."""
    if not isinstance(n, Par):
        return False
    return all(
        (isinstance(part, Dual) and isinstance(part.body, Atom)) or is_first_order(part)
        for part in n.parts
    )


def _nonsig_events(n: Type) -> list[Event] | None:
    """Events of a normalized tensor whose factors are channel-shaped."""
    if not isinstance(n, Tensor):
        return None
    events = []
    for k, part in enumerate(n.parts):
        if is_first_order(part):
            events.append(Event(f"e{k}", ins=(), outs=_fo_labels(part)))
        elif isinstance(part, Par) and _causal_shape(part):
            ins, outs = _split_labels(part)
            events.append(Event(f"e{k}", ins=ins, outs=outs))
        else:
            return None
    return events


def check_membership(
    p: Process,
    t: Type | str,
    tol: float = DEFAULT_TOL,
    budget: int = 20000,
) -> CheckReport:
    """Decide whether ``p`` inhabits the causal type ``t``.

    The type's shape selects the check: first-order types and channel types
    (including pars of channels and curried forms) ask for causality;
    tensors of channels for non-signalling; nested ``G -o (M -o H)`` combs
    for the comb conditions; ``(tensor of arrows) -o H``, optionally under
    one first-order argument, for second-order causality; ``cap`` for the
    conjunction of its branches.
    """
    if isinstance(t, str):
        t = parse_type(t)
    if isinstance(t, Cap):
        fo_embedding(t)  # branches must share one ambient shape
        reports = [check_membership(p, part, tol, budget) for part in t.parts]
        worst = max(r.residual for r in reports)
        bad = next((r.detail for r in reports if not r.passed), "")
        return CheckReport(all(r.passed for r in reports), worst, tol, bad)

    n = normalize(t)
    _check_wires(p, n)

    if isinstance(n, Unit):
        residual = abs(complex(p.scalar_value()) - 1.0) if p.backend != core.REL else (
            0.0 if bool(p.scalar_value()) else 1.0
        )
        return CheckReport(residual <= tol, float(residual), tol,
                           "" if residual <= tol else "scalar is not 1")

    if is_first_order(n):
        return backends.is_causal(p, tol)

    seq = _comb_seq(t)
    if seq is not None and len(seq) >= 4:
        events = [
            Event(f"e{k}", ins=_fo_labels(seq[2 * k]), outs=_fo_labels(seq[2 * k + 1]))
            for k in range(len(seq) // 2)
        ]
        return check_comb(p, events, tol)

    if _causal_shape(n):
        return backends.is_causal(p, tol)

    events = _nonsig_events(n)
    if events is not None:
        return check_nonsignalling(p, events, tol)

    parties = _soc_parties(t)
    if parties is not None:
        return check_soc(p, parties, tol, budget)

    raise UnsupportedType(f"no decision procedure for the shape of {render_type(t)}")
