"""Backend-specific structure: discarding, normalization, generators.

Each backend fixes what "discard" and "causal" mean concretely:

``matr+``
    Processes are tensors of non-negative reals.  Discarding is summation,
    a process is causal iff every joint-input column sums to 1
    (column-stochasticity), and the dimension scalar of a system is ``d``.

``cpm``
    Processes are Choi tensors of linear maps between Hilbert spaces.
    Discarding an output is the partial trace, a process is causal iff it is
    completely positive and trace-preserving (``tr_out J = I_in``), and the
    dimension scalar is ``d**2``.

``rel``
    Processes are boolean relations.  Discarding is existential projection
    (``any``), a process is causal iff it is total (every joint input relates
    to at least one joint output), and the dimension scalar is ``True``.
    All checks are exact; tolerances are ignored.

Numerical verdicts are reported as :class:`CheckReport` objects carrying the
worst absolute residual, scaled against ``max(1, |process|_max)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import core
from .core import (
    CPM,
    DEFAULT_TOL,
    MATR,
    REL,
    Process,
    System,
    maxabs,
)
from .errors import NotOneWay, UnsupportedBackend
from .events import Event, check_partition


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a verification: verdict plus the residual that produced it.

    ``residual`` is an absolute deviation; the verdict compares it against
    ``tol * max(1, scale)`` where ``scale`` is the largest entry of the
    process being checked.  For the exact ``rel`` backend the residual is
    0.0 or 1.0.
    """

    passed: bool
    residual: float
    tol: float
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        msg = f"{verdict} (residual {self.residual:.3g}, tol {self.tol:.3g})"
        return f"{msg}: {self.detail}" if self.detail else msg


def _scale(p: Process) -> float:
    return max(1.0, maxabs(p))


def _report(passed_residual: float, tol: float, scale: float, detail: str = "") -> CheckReport:
    return CheckReport(passed_residual <= tol * scale, float(passed_residual), tol, detail)


# -- canonical effects and states ----------------------------------------------


def discard(backend: str, systems: Sequence[System]) -> Process:
    """The discarding effect on ``systems`` (sum / trace / existential)."""
    systems = tuple(systems)
    dims = tuple(s.dim for s in systems)
    total = int(np.prod(dims, dtype=np.int64)) if dims else 1
    if backend == MATR:
        data = np.ones(dims)
    elif backend == REL:
        data = np.ones(dims, dtype=bool)
    elif backend == CPM:
        data = np.eye(total, dtype=complex).reshape(dims + dims)
    else:
        raise UnsupportedBackend(f"unknown backend {backend!r}")
    return Process(backend, (), systems, data)


def uniform_state(backend: str, systems: Sequence[System]) -> Process:
    """The canonical causal state: uniform distribution, maximally mixed
    state, or the full relation, on the given systems."""
    systems = tuple(systems)
    dims = tuple(s.dim for s in systems)
    total = int(np.prod(dims, dtype=np.int64)) if dims else 1
    if backend == MATR:
        data = np.full(dims, 1.0 / total)
    elif backend == REL:
        data = np.ones(dims, dtype=bool)
    elif backend == CPM:
        data = (np.eye(total, dtype=complex) / total).reshape(dims + dims)
    else:
        raise UnsupportedBackend(f"unknown backend {backend!r}")
    return Process(backend, systems, (), data)


def dimension(backend: str, system: System):
    """The scalar obtained by discarding the uniform-weight point: ``d`` for
    matr+, ``d**2`` for cpm, ``True`` for rel."""
    if backend == MATR:
        return float(system.dim)
    if backend == CPM:
        return float(system.dim**2)
    if backend == REL:
        return True
    raise UnsupportedBackend(f"unknown backend {backend!r}")


# -- verdicts ------------------------------------------------------------------


def is_causal(p: Process, tol: float = DEFAULT_TOL) -> CheckReport:
    """Does ``p`` send causal states to causal states, i.e. is it normalized?

    matr+: every joint-input column sums to 1.  cpm: tracing out all outputs
    leaves the identity on the inputs.  rel: totality.
    """
    if p.backend == REL:
        out_axes = tuple(range(len(p.out_wires)))
        cols = p.data.any(axis=out_axes) if out_axes else p.data
        ok = bool(np.all(cols))
        detail = ""
        if not ok:
            bad = np.argwhere(~np.atleast_1d(cols))[0]
            detail = f"no output related to input index {tuple(int(i) for i in bad)}"
        return CheckReport(ok, 0.0 if ok else 1.0, tol, detail)

    marg = core.discard_outputs(p, [w.label for w in p.out_wires])
    want = discard(p.backend, p.in_wires)
    residual = core.distance(marg, want)
    return _report(residual, tol, _scale(p), "" if residual <= tol * _scale(p) else "not normalized")


def is_positive(p: Process, tol: float = DEFAULT_TOL) -> CheckReport:
    """Entrywise non-negativity (matr+), or Hermitian positive semidefiniteness
    of the Choi matrix (cpm).  Relations are always positive."""
    if p.backend == REL:
        return CheckReport(True, 0.0, tol)
    if p.backend == MATR:
        worst = float(max(0.0, -np.min(p.data))) if p.data.size else 0.0
        return _report(worst, tol, _scale(p), "" if worst == 0.0 else "negative entry")
    J = core.choi_matrix(p)
    herm = _maxabs(J - J.conj().T)
    eigs = np.linalg.eigvalsh((J + J.conj().T) / 2.0)
    neg = float(max(0.0, -eigs.min())) if eigs.size else 0.0
    worst = max(herm, neg)
    detail = ""
    if herm > tol * _scale(p):
        detail = "not Hermitian"
    elif neg > tol * _scale(p):
        detail = f"negative eigenvalue {-neg:.3g}"
    return _report(worst, tol, _scale(p), detail)


def _maxabs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


# -- state families ------------------------------------------------------------


def causal_basis(backend: str, system: System) -> list[Process]:
    """Causal states of a single system that are jointly informationally
    complete: point masses, a tomographically complete set of pure states,
    or the singleton relations."""
    d = system.dim
    out = []
    if backend == MATR:
        for i in range(d):
            v = np.zeros(d)
            v[i] = 1.0
            out.append(Process(MATR, (system,), (), v))
    elif backend == REL:
        for i in range(d):
            v = np.zeros(d, dtype=bool)
            v[i] = True
            out.append(Process(REL, (system,), (), v))
    elif backend == CPM:
        vecs = []
        for i in range(d):
            e = np.zeros(d, dtype=complex)
            e[i] = 1.0
            vecs.append(e)
        kets = list(vecs)
        for i in range(d):
            for j in range(i + 1, d):
                kets.append((vecs[i] + vecs[j]) / np.sqrt(2))
                kets.append((vecs[i] + 1j * vecs[j]) / np.sqrt(2))
        for k in kets:
            out.append(Process(CPM, (system,), (), np.outer(k, k.conj())))
    else:
        raise UnsupportedBackend(f"unknown backend {backend!r}")
    return out


def random_causal(
    backend: str,
    out_systems: Sequence[System],
    in_systems: Sequence[System],
    rng: np.random.Generator,
) -> Process:
    """Draw a random causal process with the given inputs and outputs.

    matr+: independent uniform weights, columns normalized.  cpm: the channel
    ``rho -> tr_env(V rho V^dag)`` for a Haar-ish random isometry ``V`` (QR of
    a Gaussian matrix).  rel: a random relation patched to be total.
    """
    out_systems, in_systems = tuple(out_systems), tuple(in_systems)
    out_dims = tuple(s.dim for s in out_systems)
    in_dims = tuple(s.dim for s in in_systems)
    dout = int(np.prod(out_dims, dtype=np.int64)) if out_dims else 1
    din = int(np.prod(in_dims, dtype=np.int64)) if in_dims else 1

    if backend == MATR:
        m = rng.uniform(0.05, 1.0, size=(dout, din))
        m /= m.sum(axis=0, keepdims=True)
        return Process(MATR, out_systems, in_systems, m.reshape(out_dims + in_dims))

    if backend == REL:
        m = rng.random((dout, din)) < 0.35
        for j in range(din):
            if not m[:, j].any():
                m[rng.integers(dout), j] = True
        return Process(REL, out_systems, in_systems, m.reshape(out_dims + in_dims))

    if backend == CPM:
        denv = max(1, -(-din // dout))  # smallest env with dout*denv >= din
        g = rng.normal(size=(dout * denv, din)) + 1j * rng.normal(size=(dout * denv, din))
        q, _ = np.linalg.qr(g)
        v = q[:, :din].reshape(dout, denv, din)
        # J[b, a, b', a'] = sum_e V[b,e,a] V*[b',e,a']
        j = np.einsum("bea,ceA->bacA", v, v.conj())
        return Process(CPM, out_systems, in_systems, j.reshape(out_dims + in_dims + out_dims + in_dims))

    raise UnsupportedBackend(f"unknown backend {backend!r}")


def random_state(backend: str, systems: Sequence[System], rng: np.random.Generator) -> Process:
    return random_causal(backend, systems, (), rng)


# -- spanning families of causal channels --------------------------------------
#
# Several checks quantify over "all causal processes one could plug in".  For
# matr+ that quantification reduces to the affine hull of the deterministic
# function channels; for rel, to the function channels by monotonicity (every
# total relation contains a function, and plugging is monotone in each
# argument); for cpm, to an affine basis of the trace-preserving subspace
# anchored at the completely depolarizing channel.


def channel_family_size(backend: str, out_systems: Sequence[System], in_systems: Sequence[System]) -> int:
    out_dims = [s.dim for s in out_systems]
    in_dims = [s.dim for s in in_systems]
    dout = int(np.prod(out_dims, dtype=np.int64)) if out_dims else 1
    din = int(np.prod(in_dims, dtype=np.int64)) if in_dims else 1
    if backend in (MATR, REL):
        return dout**din
    if backend == CPM:
        return 1 + (dout**2 - 1) * din**2
    raise UnsupportedBackend(f"unknown backend {backend!r}")


def _hermitian_basis(d: int) -> list[np.ndarray]:
    basis = []
    for i in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1.0
        basis.append(m)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = m[j, i] = 1.0
            basis.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = -1j
            m[j, i] = 1j
            basis.append(m)
    return basis


def _traceless_hermitian_basis(d: int) -> list[np.ndarray]:
    basis = []
    for i in range(d - 1):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1.0
        m[i + 1, i + 1] = -1.0
        basis.append(m)
    basis.extend(m for m in _hermitian_basis(d) if abs(np.trace(m)) < 0.5)
    return basis


def causal_channel_family(
    backend: str, out_systems: Sequence[System], in_systems: Sequence[System]
) -> list[Process]:
    """Causal channels whose affine hull contains (matr+/cpm) or which
    dominate (rel) every causal channel of the given shape.

    matr+/rel: all deterministic function channels.  cpm: the completely
    depolarizing channel ``J0 = I_out/d_out (x) I_in`` plus the perturbations
    ``J0 + (G_m (x) F_n) / (2 d_out)`` over a traceless Hermitian basis
    ``{G_m}`` on the output factor and a full Hermitian basis ``{F_n}`` on
    the input factor; all are CPTP and they affinely span the
    trace-preserving subspace.
    """
    out_systems, in_systems = tuple(out_systems), tuple(in_systems)
    out_dims = tuple(s.dim for s in out_systems)
    in_dims = tuple(s.dim for s in in_systems)
    dout = int(np.prod(out_dims, dtype=np.int64)) if out_dims else 1
    din = int(np.prod(in_dims, dtype=np.int64)) if in_dims else 1
    shape = out_dims + in_dims
    members: list[Process] = []

    if backend in (MATR, REL):
        dtype = bool if backend == REL else float
        for g in itertools.product(range(dout), repeat=din):
            m = np.zeros((dout, din), dtype=dtype)
            for a, b in enumerate(g):
                m[b, a] = True if backend == REL else 1.0
            members.append(Process(backend, out_systems, in_systems, m.reshape(shape)))
        return members

    if backend == CPM:
        j0 = np.kron(np.eye(dout, dtype=complex) / dout, np.eye(din, dtype=complex))
        eps = 1.0 / (2.0 * dout)
        cpm_shape = shape + shape
        members.append(Process(CPM, out_systems, in_systems, j0.reshape(cpm_shape)))
        for g in _traceless_hermitian_basis(dout):
            for f in _hermitian_basis(din):
                j = j0 + eps * np.kron(g, f)
                members.append(Process(CPM, out_systems, in_systems, j.reshape(cpm_shape)))
        return members

    raise UnsupportedBackend(f"unknown backend {backend!r}")


# -- one-way factorization -----------------------------------------------------


def factorize_one_way(
    p: Process,
    first: Event,
    second: Event,
    tol: float = DEFAULT_TOL,
    mem_label: str | None = None,
) -> tuple[Process, Process]:
    """Split a one-way process into ``first`` followed by ``second`` through
    an explicit classical memory wire.

    Writing ``Phi[k, l | i, j]`` for the process with first-event input ``i``,
    first-event output ``k``, second-event input ``j``, second-event output
    ``l``, the premise is that the marginal ``Phi'[k | i] = sum_l Phi`` does
    not depend on ``j``.  The factors are then

        Phi1[k, (i',k') | i]  = Phi'[k | i] * delta(i,i') * delta(k,k')
        Phi2[l | (i',k'), j]  = Phi[k', l | i', j] / Phi'[k' | i']   if Phi' > 0
                              = delta(l, 0)                           otherwise

    and ``Phi1`` plugged into ``Phi2`` along the memory wire reconstructs the
    original process exactly.  For ``rel`` the division is replaced by a case
    split; for ``cpm`` no comparable canonical construction is performed here
    and :class:`UnsupportedBackend` is raised.
    """
    if p.backend == CPM:
        raise UnsupportedBackend(
            "explicit one-way factorization is constructed for matr+ and rel only"
        )
    check_partition([first, second], p)

    order = first.outs + second.outs + first.ins + second.ins
    wires = tuple(p.wire(lbl) for lbl in order)
    data = core._reorder_data(p, wires)
    kdims = tuple(p.wire(lbl).dim for lbl in first.outs)
    ldims = tuple(p.wire(lbl).dim for lbl in second.outs)
    idims = tuple(p.wire(lbl).dim for lbl in first.ins)
    jdims = tuple(p.wire(lbl).dim for lbl in second.ins)
    K = int(np.prod(kdims, dtype=np.int64)) if kdims else 1
    L = int(np.prod(ldims, dtype=np.int64)) if ldims else 1
    I = int(np.prod(idims, dtype=np.int64)) if idims else 1
    J = int(np.prod(jdims, dtype=np.int64)) if jdims else 1
    m = data.reshape(K, L, I, J)

    if p.backend == REL:
        marg = m.any(axis=1)
        if not all(np.array_equal(marg[:, :, j], marg[:, :, 0]) for j in range(J)):
            raise NotOneWay(
                f"marginal on {first.name!r} depends on the input of {second.name!r}"
            )
        phi1 = np.zeros((K, I * K, I), dtype=bool)
        phi2 = np.zeros((L, I * K, J), dtype=bool)
        for i in range(I):
            for k in range(K):
                phi1[k, i * K + k, i] = marg[k, i, 0]
                if marg[k, i, 0]:
                    phi2[:, i * K + k, :] = m[k, :, i, :]
                else:
                    phi2[0, i * K + k, :] = True
    else:
        marg = m.sum(axis=1)
        dev = max(
            (_maxabs(marg[:, :, j] - marg[:, :, 0]) for j in range(J)), default=0.0
        )
        if dev > tol * _scale(p):
            raise NotOneWay(
                f"marginal on {first.name!r} depends on the input of {second.name!r} "
                f"(deviation {dev:.3g}, tol {tol:.3g})"
            )
        phi_prime = marg.mean(axis=2)
        phi1 = np.zeros((K, I * K, I))
        phi2 = np.zeros((L, I * K, J))
        for i in range(I):
            for k in range(K):
                phi1[k, i * K + k, i] = phi_prime[k, i]
                if phi_prime[k, i] > 0.0:
                    phi2[:, i * K + k, :] = m[k, :, i, :] / phi_prime[k, i]
                else:
                    phi2[0, i * K + k, :] = 1.0

    taken = {w.label for w in p.wires}
    mem = mem_label if mem_label is not None else "M"
    n = 0
    while mem in taken:
        mem = f"M{n}"
        n += 1
    mem_sys = System(mem, I * K)

    first_outs = tuple(p.wire(lbl) for lbl in first.outs)
    first_ins = tuple(p.wire(lbl) for lbl in first.ins)
    second_outs = tuple(p.wire(lbl) for lbl in second.outs)
    second_ins = tuple(p.wire(lbl) for lbl in second.ins)
    p1 = Process(
        p.backend,
        first_outs + (mem_sys,),
        first_ins,
        phi1.reshape(kdims + (I * K,) + idims),
    )
    p2 = Process(
        p.backend,
        second_outs,
        (mem_sys,) + second_ins,
        phi2.reshape(ldims + (I * K,) + jdims),
    )
    return p1, p2
