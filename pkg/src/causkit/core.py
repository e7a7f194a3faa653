"""Dense process tensors with labeled wires.

A :class:`Process` is a box with named input and output wires, realized as a
dense numpy array in one of three backends:

``matr+``
    Nonnegative real matrices (classical stochastic linear maps).  One array
    axis per wire, ``float64``.

``cpm``
    Completely positive maps stored as Choi matrices, ``complex128``.  Each
    wire of Hilbert dimension ``d`` contributes *two* axes of size ``d`` — a
    ket axis and a bra axis.  All ket axes come before all bra axes, so
    flattening the first half of the axes against the second half yields the
    ordinary Choi matrix over (⊗ outputs) ⊗ (⊗ inputs).

``rel``
    Boolean matrices over the join/meet semiring, ``bool_``.  One axis per
    wire.

The canonical axis order is row-major with **all output wires before all
input wires**, in the order the wires are listed.  Serialized data (see
:func:`to_json_dict`) is the flat row-major ravel of exactly this layout.

Composing two wires always contracts like-with-like: a single axis pair for
``matr+``/``rel``, and ket-with-ket plus bra-with-bra for ``cpm`` (the link
product).  A pleasant consequence is that bending a wire from input to output
or back is pure relabeling — the stored array never changes, matching the
compact-closed cup/cap semantics in all three backends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BackendMismatch,
    CyclicWiring,
    DuplicateLabel,
    FormatError,
    InvalidPermutation,
    NoSuchWire,
    ShapeMismatch,
    UnsupportedBackend,
)

MATR = "matr+"
CPM = "cpm"
REL = "rel"
BACKENDS = (MATR, CPM, REL)

#: Default numerical tolerance for every check in the package.
DEFAULT_TOL = 1e-9

_DTYPES = {MATR: np.float64, CPM: np.complex128, REL: np.bool_}


def _check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise UnsupportedBackend(f"unknown backend {backend!r}, expected one of {BACKENDS}")
    return backend


@dataclass(frozen=True, order=True)
class System:
    """A wire type: a label together with its dimension.

    For ``cpm`` the dimension is the Hilbert-space dimension of the wire (the
    Choi axes have this size); for ``matr+`` it is the number of classical
    states; for ``rel`` the size of the underlying set.
    """

    label: str
    dim: int

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ShapeMismatch(f"system label must be a non-empty string, got {self.label!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ShapeMismatch(f"system {self.label!r} must have integer dimension >= 1, got {self.dim!r}")


@dataclass(frozen=True, eq=False)
class Process:
    """A dense process tensor. See the module docstring for the data layout."""

    backend: str
    out_wires: tuple[System, ...]
    in_wires: tuple[System, ...]
    data: np.ndarray

    def __post_init__(self):
        _check_backend(self.backend)
        object.__setattr__(self, "out_wires", tuple(self.out_wires))
        object.__setattr__(self, "in_wires", tuple(self.in_wires))
        labels = [w.label for w in self.out_wires + self.in_wires]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise DuplicateLabel(f"wire labels must be unique within a process: {dupes}")
        data = np.asarray(self.data, dtype=_DTYPES[self.backend])
        expected = self.expected_shape(self.backend, self.out_wires, self.in_wires)
        if data.shape != expected:
            raise ShapeMismatch(f"data shape {data.shape} does not match wires, expected {expected}")
        object.__setattr__(self, "data", data)

    # -- structural helpers -------------------------------------------------

    @staticmethod
    def expected_shape(backend: str, out_wires: Sequence[System], in_wires: Sequence[System]) -> tuple[int, ...]:
        dims = tuple(w.dim for w in out_wires) + tuple(w.dim for w in in_wires)
        return dims + dims if backend == CPM else dims

    @property
    def wires(self) -> tuple[System, ...]:
        """All wires in canonical order: outputs first, then inputs."""
        return self.out_wires + self.in_wires

    @property
    def n_wires(self) -> int:
        return len(self.out_wires) + len(self.in_wires)

    @property
    def is_scalar(self) -> bool:
        return self.n_wires == 0

    def wire_pos(self, label: str) -> int:
        """Position of the wire in the canonical wire order."""
        for i, w in enumerate(self.wires):
            if w.label == label:
                return i
        raise NoSuchWire(f"process has no wire {label!r} (wires: {[w.label for w in self.wires]})")

    def wire(self, label: str) -> System:
        return self.wires[self.wire_pos(label)]

    def role(self, label: str) -> str:
        return "out" if self.wire_pos(label) < len(self.out_wires) else "in"

    def axes(self, label: str) -> tuple[int, ...]:
        """Array axes belonging to one wire: ``(axis,)`` or ``(ket, bra)``."""
        i = self.wire_pos(label)
        if self.backend == CPM:
            return (i, self.n_wires + i)
        return (i,)

    def scalar_value(self):
        if not self.is_scalar:
            raise ShapeMismatch("process still has open wires, not a scalar")
        v = self.data[()]
        if self.backend == REL:
            return bool(v)
        if self.backend == MATR:
            return float(v)
        return complex(v)

    def __repr__(self):
        outs = ", ".join(f"{w.label}[{w.dim}]" for w in self.out_wires) or "I"
        ins = ", ".join(f"{w.label}[{w.dim}]" for w in self.in_wires) or "I"
        return f"<Process {self.backend}: {ins} -> {outs}>"


def maxabs(p: Process) -> float:
    """Largest absolute entry; the natural scale for residual normalization."""
    if p.data.size == 0:
        return 0.0
    return float(np.max(np.abs(p.data.astype(np.complex128 if p.backend == CPM else np.float64))))


def distance(f: Process, g: Process) -> float:
    """Max-abs difference between two processes with identical wire layout."""
    _require_same_shape(f, g)
    if f.backend == REL:
        return 0.0 if np.array_equal(f.data, g.data) else 1.0
    return float(np.max(np.abs(f.data - g.data))) if f.data.size else 0.0


def _require_same_shape(f: Process, g: Process) -> None:
    if f.backend != g.backend:
        raise BackendMismatch(f"{f.backend} vs {g.backend}")
    if f.out_wires != g.out_wires or f.in_wires != g.in_wires:
        raise ShapeMismatch(
            f"wire layouts differ: {f.out_wires}/{f.in_wires} vs {g.out_wires}/{g.in_wires}"
        )


def _as_num(data: np.ndarray) -> np.ndarray:
    """Booleans as int64 so semiring sums cannot overflow, others unchanged."""
    return data.astype(np.int64) if data.dtype == np.bool_ else data


def _reorder_data(p: Process, new_wires: Sequence[System]) -> np.ndarray:
    """Transpose ``p.data`` so its wire axes follow ``new_wires`` order."""
    idx = [p.wire_pos(w.label) for w in new_wires]
    n = p.n_wires
    perm = idx + [n + i for i in idx] if p.backend == CPM else idx
    return p.data.transpose(perm)


# -- constructors -----------------------------------------------------------


def scalar(backend: str, value) -> Process:
    """A process with no wires."""
    return Process(backend, (), (), np.asarray(value, dtype=_DTYPES[_check_backend(backend)]))


def identity(backend: str, sys_in: System, out_label: str | None = None) -> Process:
    """The identity channel on one wire.

    The output wire needs its own label (labels are unique within a process);
    by default the input label with a prime appended.
    """
    _check_backend(backend)
    out_label = sys_in.label + "'" if out_label is None else out_label
    d = sys_in.dim
    eye = np.eye(d)
    data = np.multiply.outer(eye, eye) if backend == CPM else eye
    return Process(backend, (System(out_label, d),), (sys_in,), data)


def cap(backend: str, dim: int, label_x: str, label_y: str) -> Process:
    """The cap effect: two input wires of equal dimension contracted together."""
    _check_backend(backend)
    eye = np.eye(dim)
    data = np.multiply.outer(eye, eye) if backend == CPM else eye
    return Process(backend, (), (System(label_x, dim), System(label_y, dim)), data)


def cup(backend: str, dim: int, label_x: str, label_y: str) -> Process:
    """The cup state: the same tensor as :func:`cap` with both wires as outputs."""
    _check_backend(backend)
    eye = np.eye(dim)
    data = np.multiply.outer(eye, eye) if backend == CPM else eye
    return Process(backend, (System(label_x, dim), System(label_y, dim)), (), data)


# -- structural operations ---------------------------------------------------


def rename(p: Process, mapping: Mapping[str, str]) -> Process:
    """Relabel wires; dims and data are untouched."""
    for old in mapping:
        p.wire_pos(old)  # raises NoSuchWire
    new_out = tuple(System(mapping.get(w.label, w.label), w.dim) for w in p.out_wires)
    new_in = tuple(System(mapping.get(w.label, w.label), w.dim) for w in p.in_wires)
    return Process(p.backend, new_out, new_in, p.data)


def tensor_par(f: Process, g: Process) -> Process:
    """Place two processes side by side (monoidal product).

    Result wires: ``f`` outputs, ``g`` outputs, ``f`` inputs, ``g`` inputs.
    """
    if f.backend != g.backend:
        raise BackendMismatch(f"{f.backend} vs {g.backend}")
    overlap = {w.label for w in f.wires} & {w.label for w in g.wires}
    if overlap:
        raise DuplicateLabel(f"wire labels shared between the factors: {sorted(overlap)}")
    out = f.out_wires + g.out_wires
    ins = f.in_wires + g.in_wires
    if f.backend == REL:
        raw = np.logical_and.outer(f.data, g.data)
    else:
        raw = np.multiply.outer(f.data, g.data)

    nf, ng = f.n_wires, g.n_wires
    if f.backend == CPM:
        # raw axes: [f kets, f bras, g kets, g bras]
        def ket(src, i):
            return i if src == "f" else 2 * nf + i

        def bra(src, i):
            return nf + i if src == "f" else 2 * nf + ng + i

    else:
        def ket(src, i):
            return i if src == "f" else nf + i

        bra = None

    order = (
        [("f", i) for i in range(len(f.out_wires))]
        + [("g", i) for i in range(len(g.out_wires))]
        + [("f", len(f.out_wires) + i) for i in range(len(f.in_wires))]
        + [("g", len(g.out_wires) + i) for i in range(len(g.in_wires))]
    )
    perm = [ket(src, i) for src, i in order]
    if f.backend == CPM:
        perm += [bra(src, i) for src, i in order]
    return Process(f.backend, out, ins, raw.transpose(perm))


def compose_seq(f: Process, g: Process) -> Process:
    """Sequential composition: feed every output of ``f`` into ``g`` (f first).

    Matching is positional: the i-th output of ``f`` plugs into the i-th input
    of ``g``; labels at the interface disappear.
    """
    if f.backend != g.backend:
        raise BackendMismatch(f"{f.backend} vs {g.backend}")
    if tuple(w.dim for w in f.out_wires) != tuple(w.dim for w in g.in_wires):
        raise ShapeMismatch(
            f"cannot compose: f outputs {[w.dim for w in f.out_wires]} "
            f"vs g inputs {[w.dim for w in g.in_wires]}"
        )
    overlap = {w.label for w in g.out_wires} & {w.label for w in f.in_wires}
    if overlap:
        raise DuplicateLabel(f"composite would repeat labels {sorted(overlap)}; rename() first")

    n_mid = len(f.out_wires)
    nf, ng = f.n_wires, g.n_wires
    if f.backend == CPM:
        g_axes = list(range(len(g.out_wires), ng)) + list(range(ng + len(g.out_wires), 2 * ng))
        f_axes = list(range(n_mid)) + list(range(nf, nf + n_mid))
        raw = np.tensordot(g.data, f.data, axes=(g_axes, f_axes))
        # raw axes: [g out kets, g out bras, f in kets, f in bras]
        go, fi = len(g.out_wires), len(f.in_wires)
        perm = (
            list(range(go))
            + list(range(2 * go, 2 * go + fi))
            + list(range(go, 2 * go))
            + list(range(2 * go + fi, 2 * go + 2 * fi))
        )
        data = raw.transpose(perm)
    else:
        raw = np.tensordot(
            _as_num(g.data),
            _as_num(f.data),
            axes=(list(range(len(g.out_wires), ng)), list(range(n_mid))),
        )
        data = raw > 0 if f.backend == REL else raw
    return Process(f.backend, g.out_wires, f.in_wires, data)


def permute(p: Process, out_order: Sequence[str], in_order: Sequence[str]) -> Process:
    """Reorder the wires of a process (pure relabeling of axis positions)."""
    if sorted(out_order) != sorted(w.label for w in p.out_wires) or sorted(in_order) != sorted(
        w.label for w in p.in_wires
    ):
        raise InvalidPermutation(
            f"orders {list(out_order)}/{list(in_order)} are not permutations of "
            f"{[w.label for w in p.out_wires]}/{[w.label for w in p.in_wires]}"
        )
    new_out = tuple(p.wire(l) for l in out_order)
    new_in = tuple(p.wire(l) for l in in_order)
    return Process(p.backend, new_out, new_in, _reorder_data(p, new_out + new_in))


def bend(p: Process, label: str, to: str) -> Process:
    """Move one wire to the other side of the box (transposition via cup/cap).

    ``to`` is ``"in"`` or ``"out"``.  The wire keeps its label and dimension
    and is appended at the end of the target side; the stored array is
    unchanged up to axis order.
    """
    if to not in ("in", "out"):
        raise ShapeMismatch(f"bend target must be 'in' or 'out', got {to!r}")
    if p.role(label) == to:
        raise ShapeMismatch(f"wire {label!r} is already an {to}-wire")
    w = p.wire(label)
    if to == "in":
        new_out = tuple(x for x in p.out_wires if x.label != label)
        new_in = p.in_wires + (w,)
    else:
        new_out = p.out_wires + (w,)
        new_in = tuple(x for x in p.in_wires if x.label != label)
    return Process(p.backend, new_out, new_in, _reorder_data(p, new_out + new_in))


def discard_outputs(p: Process, labels: Iterable[str]) -> Process:
    """Marginalize output wires: sum (matr+), join (rel) or trace (cpm)."""
    labels = list(labels)
    for l in labels:
        if p.role(l) != "out":
            raise NoSuchWire(f"{l!r} is not an output wire of {p!r}")
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"repeated labels in discard: {labels}")
    if not labels:
        return p
    keep_out = tuple(w for w in p.out_wires if w.label not in labels)

    if p.backend == CPM:
        # Trace each discarded wire: its ket and bra axes share a subscript.
        n = p.n_wires
        subs = list(range(2 * n))
        out_subs = []
        for i, w in enumerate(p.wires):
            if w.label in labels:
                subs[n + i] = subs[i]
            else:
                out_subs.append(i)
        out_subs = out_subs + [n + i for i in out_subs]
        data = np.einsum(p.data, subs, out_subs)
    else:
        axes = tuple(p.wire_pos(l) for l in labels)
        data = p.data.any(axis=axes) if p.backend == REL else p.data.sum(axis=axes)
    return Process(p.backend, keep_out, p.in_wires, data)


def plug(f: Process, g: Process, wiring: Sequence[tuple[str, str]]) -> Process:
    """Contract two boxes along the given wire pairs in one shot.

    Each pair is ``(f_wire, g_wire)`` with equal dimensions and opposite
    roles; pairs may run in both directions (outputs of ``f`` into inputs of
    ``g`` and vice versa), which is how comb-shaped boxes interlock.  The
    result equals the equivalent expression built from ``bend``/``permute``/
    ``compose_seq`` with explicit caps.

    Remaining wires keep their order: ``f`` outputs, ``g`` outputs, ``f``
    inputs, ``g`` inputs.
    """
    if f.backend != g.backend:
        raise BackendMismatch(f"{f.backend} vs {g.backend}")
    if f is g:
        raise CyclicWiring("plugging a process into itself is a closed loop; use bend + cap")

    f_used: set[str] = set()
    g_used: set[str] = set()
    for fl, gl in wiring:
        fw, gw = f.wire(fl), g.wire(gl)
        if fl in f_used or gl in g_used:
            raise CyclicWiring(f"wire pair ({fl!r}, {gl!r}) reuses an already plugged wire")
        f_used.add(fl)
        g_used.add(gl)
        if fw.dim != gw.dim:
            raise ShapeMismatch(f"cannot plug {fl!r} (dim {fw.dim}) into {gl!r} (dim {gw.dim})")
        if f.role(fl) == g.role(gl):
            raise CyclicWiring(f"wires {fl!r} and {gl!r} are both {f.role(fl)}-wires")

    keep_f = [w for w in f.wires if w.label not in f_used]
    keep_g = [w for w in g.wires if w.label not in g_used]
    overlap = {w.label for w in keep_f} & {w.label for w in keep_g}
    if overlap:
        raise DuplicateLabel(f"remaining wires share labels {sorted(overlap)}; rename() first")

    # Assign einsum subscripts: one id (cpm: two) per distinct wire, shared
    # across a plugged pair.
    next_id = 0

    def fresh():
        nonlocal next_id
        next_id += 2
        return next_id - 2

    f_ids = {w.label: fresh() for w in f.wires}
    g_ids = {w.label: fresh() for w in g.wires}
    for fl, gl in wiring:
        g_ids[gl] = f_ids[fl]

    cpm = f.backend == CPM

    def sublist(p, ids):
        kets = [ids[w.label] for w in p.wires]
        return kets + [i + 1 for i in kets] if cpm else kets

    keep = [(w, f_ids[w.label], "out" if f.role(w.label) == "out" else "in") for w in keep_f]
    keep += [(w, g_ids[w.label], "out" if g.role(w.label) == "out" else "in") for w in keep_g]
    out_wires = tuple(w for w, _, r in keep if r == "out")
    in_wires = tuple(w for w, _, r in keep if r == "in")
    by_label = {w.label: i for w, i, _ in keep}
    out_ids = [by_label[w.label] for w in out_wires + in_wires]
    out_sub = out_ids + [i + 1 for i in out_ids] if cpm else out_ids

    raw = np.einsum(_as_num(f.data), sublist(f, f_ids), _as_num(g.data), sublist(g, g_ids), out_sub)
    data = raw > 0 if f.backend == REL else raw
    return Process(f.backend, out_wires, in_wires, data)


# -- views --------------------------------------------------------------------


def matrix(p: Process) -> np.ndarray:
    """matr+/rel process as a (prod out dims) x (prod in dims) matrix."""
    if p.backend == CPM:
        raise UnsupportedBackend("use choi_matrix() for cpm processes")
    rows = int(np.prod([w.dim for w in p.out_wires], dtype=np.int64))
    cols = int(np.prod([w.dim for w in p.in_wires], dtype=np.int64))
    return p.data.reshape(rows, cols)


def choi_matrix(p: Process) -> np.ndarray:
    """cpm process as its square Choi matrix over (⊗ outs) ⊗ (⊗ ins)."""
    if p.backend != CPM:
        raise UnsupportedBackend(f"{p.backend} processes have no Choi matrix")
    d = int(np.prod([w.dim for w in p.wires], dtype=np.int64))
    return p.data.reshape(d, d)


# -- serialization -------------------------------------------------------------


def to_json_dict(p: Process) -> dict:
    """Serialize to the interchange schema (see :func:`from_json_dict`)."""
    wires = [{"name": w.label, "dim": w.dim, "role": "out"} for w in p.out_wires]
    wires += [{"name": w.label, "dim": w.dim, "role": "in"} for w in p.in_wires]
    if p.backend == CPM:
        flat = choi_matrix(p).ravel()
        data = [[float(v.real), float(v.imag)] for v in flat]
    elif p.backend == REL:
        data = [int(v) for v in p.data.ravel()]
    else:
        data = [float(v) for v in p.data.ravel()]
    return {"backend": p.backend, "wires": wires, "data": data}


def from_json_dict(doc: Mapping) -> Process:
    """Deserialize a process.

    Schema::

        {"backend": "matr+" | "cpm" | "rel",
         "wires": [{"name": str, "dim": int, "role": "out" | "in"}, ...],
         "data": [...]}

    Wires must list every output before the first input (the canonical
    order); ``data`` is the flat row-major array in that order.  For ``cpm``
    each entry is a ``[re, im]`` pair of the row-major Choi matrix.
    """
    try:
        backend = doc["backend"]
        wire_docs = doc["wires"]
        data = doc["data"]
    except (KeyError, TypeError) as e:
        raise FormatError(f"process document must have backend/wires/data: {e}") from e
    _check_backend(backend)

    outs: list[System] = []
    ins: list[System] = []
    for wd in wire_docs:
        try:
            sysm = System(str(wd["name"]), int(wd["dim"]))
            role = wd["role"]
        except (KeyError, TypeError, ValueError, ShapeMismatch) as e:
            raise FormatError(f"bad wire entry {wd!r}: {e}") from e
        if role == "out":
            if ins:
                raise FormatError("output wires must be listed before input wires")
            outs.append(sysm)
        elif role == "in":
            ins.append(sysm)
        else:
            raise FormatError(f"wire role must be 'out' or 'in', got {role!r}")

    dims = tuple(w.dim for w in outs) + tuple(w.dim for w in ins)
    size = int(np.prod(dims, dtype=np.int64)) if dims else 1
    try:
        if backend == CPM:
            if len(data) != size * size:
                raise FormatError(f"cpm data must have {size * size} [re, im] pairs, got {len(data)}")
            arr = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
            arr = arr.reshape(dims + dims) if dims else arr.reshape(())
        else:
            if len(data) != size:
                raise FormatError(f"data must have {size} entries, got {len(data)}")
            arr = np.asarray(data, dtype=np.float64).reshape(dims)
            if backend == REL:
                if not np.all((arr == 0) | (arr == 1)):
                    raise FormatError("rel data entries must be 0 or 1")
                arr = arr.astype(np.bool_)
    except (TypeError, ValueError) as e:
        raise FormatError(f"malformed data payload: {e}") from e
    return Process(backend, tuple(outs), tuple(ins), arr)


def load_process(path) -> Process:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: {e}") from e
    return from_json_dict(doc)


def dump_process(p: Process, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(p), fh, indent=1)
        fh.write("\n")
