"""Application circuits: UCCSD ansatz layers and first-order Trotter steps.

This module assembles whole-algorithm circuits out of the per-term block
compilers in synth.  A Trotter step factors the Hamiltonian into its exact
term exponentials in a fixed order: the diagonal part first (a global phase
plus Rz / Rzz rotations, which is exact since everything commutes), then one
block per excitation family.  Under the parallelized schedule, permutation
partners that share a four-mode window ride a single double-excitation block,
and controlled excitations with the same core and the same effective MS
window share one sandwich with their CRz rotations interleaved.  The baseline
schedule compiles every term on its own: per-term blocks for the real orbital
class, string-by-string for the complex class, with controlled terms always
spending one CRz sandwich per core string.

First-order Trotter semantics make the term order part of the contract, so
everything here is deterministic: excitation terms keep their canonical
ordering and fused groups sit at the position of their first member.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .circuit import MS, Circuit, Clifford1, CRz, Gate, GlobalPhase, Rz, Rzz
from .fermion import (
    ExcitationTerm,
    HamiltonianTerms,
    double,
    local_equivalence_conjugate,
    local_pauli,
    single,
)
from .synth import (
    _controlled_halves,
    _rotation_pairs,
    _sandwich,
    baseline_string_by_string,
    compile_controlled_single,
    compile_single_excitation,
    compile_double_block,
    compile_symmetrized,
)
from .verify import circuit_unitary, dense_sum


class EvolutionError(ValueError):
    """Raised for invalid ansatz or Trotter configurations."""


# --- domain types ---------------------------------------------------------------


@dataclass(frozen=True)
class AnsatzSpec:
    """UCCSD ansatz over spin orbitals; even indices are alpha, odd beta.

    ``parameters`` carries one angle per generated excitation, ordered
    singles first and doubles second, each block sorted by orbital index.
    """

    n_modes: int
    occupied: tuple[int, ...]
    virtual: tuple[int, ...]
    parameters: tuple[float, ...]

    def __post_init__(self) -> None:
        occ = tuple(int(m) for m in self.occupied)
        vir = tuple(int(m) for m in self.virtual)
        object.__setattr__(self, "occupied", occ)
        object.__setattr__(self, "virtual", vir)
        object.__setattr__(self, "parameters", tuple(float(x) for x in self.parameters))
        for m in occ + vir:
            if not 0 <= m < self.n_modes:
                raise EvolutionError(f"mode {m} outside register of {self.n_modes}")
        if len(set(occ)) != len(occ) or len(set(vir)) != len(vir):
            raise EvolutionError("repeated mode in occupied or virtual list")
        if set(occ) & set(vir):
            raise EvolutionError("occupied and virtual lists overlap")
        expected = len(_single_pairs(occ, vir)) + len(_double_quads(occ, vir))
        if len(self.parameters) != expected:
            raise EvolutionError(
                f"{len(self.parameters)} parameters for {expected} excitations"
            )


@dataclass(frozen=True)
class TrotterConfig:
    """Time step plus the orbital class and scheduling switches."""

    time_step: float
    orbital_class: str = "real"
    scheduling: str = "parallelized"

    def __post_init__(self) -> None:
        t = float(self.time_step)
        if not np.isfinite(t):
            raise EvolutionError("time step must be finite")
        object.__setattr__(self, "time_step", t)
        if self.orbital_class not in ("real", "complex"):
            raise EvolutionError(f"unknown orbital class {self.orbital_class!r}")
        if self.scheduling not in ("parallelized", "baseline"):
            raise EvolutionError(f"unknown scheduling {self.scheduling!r}")


# --- UCCSD ansatz ---------------------------------------------------------------


def _single_pairs(occupied, virtual) -> list[tuple[int, int]]:
    return [
        (i, a)
        for i in sorted(occupied)
        for a in sorted(virtual)
        if i % 2 == a % 2
    ]


def _double_quads(occupied, virtual) -> list[tuple[int, int, int, int]]:
    occ = sorted(occupied)
    vir = sorted(virtual)
    out = []
    for xi, i in enumerate(occ):
        for j in occ[xi + 1 :]:
            for xa, a in enumerate(vir):
                for b in vir[xa + 1 :]:
                    if (i + j) % 2 == (a + b) % 2 and {i % 2, j % 2} == {a % 2, b % 2}:
                        out.append((i, j, a, b))
    return out


def uccsd_excitations(spec: AnsatzSpec) -> tuple[ExcitationTerm, ...]:
    """The generated excitation terms in parameter order."""
    singles = [single(i, a) for i, a in _single_pairs(spec.occupied, spec.virtual)]
    doubles = [
        double(a, b, i, j) for i, j, a, b in _double_quads(spec.occupied, spec.virtual)
    ]
    return tuple(singles + doubles)


def _double_slot(t: ExcitationTerm) -> tuple[int, float]:
    """Map a double onto its pairing slot within the sorted window."""
    w = t.modes
    partitions = (
        ({w[0], w[1]}, {w[2], w[3]}),
        ({w[0], w[2]}, {w[1], w[3]}),
        ({w[0], w[3]}, {w[1], w[2]}),
    )
    sub, sup = set(t.sub), set(t.sup)
    for i, (first, second) in enumerate(partitions):
        if sub == first and sup == second:
            return i, 1.0
        if sub == second and sup == first:
            return i, -1.0
    raise EvolutionError(f"modes {t.sub}/{t.sup} do not partition window {w}")


def _double_term_block(t: ExcitationTerm, theta: float, width: int) -> Circuit:
    """One antisymmetrized double as a four-MS window block."""
    slot, sign = _double_slot(t)
    angles = [0.0, 0.0, 0.0]
    angles[slot] = sign * t.coefficient * theta
    return compile_double_block(*t.modes, tuple(angles), n_qubits=width)


def build_uccsd_layer(spec: AnsatzSpec, scheduling: str = "parallelized") -> Circuit:
    """One first-order product layer exp(-i theta_1 G_1) ... exp(-i theta_k G_k).

    Excitations are every spin-preserving occupied-to-virtual move: singles
    cost two MS gates each and doubles four under the parallelized compilers;
    the baseline schedule lowers each generator string by string instead.
    """
    if scheduling not in ("parallelized", "baseline"):
        raise EvolutionError(f"unknown scheduling {scheduling!r}")
    terms = uccsd_excitations(spec)
    gates: list[Gate] = []
    for t, theta in zip(terms, spec.parameters):
        if scheduling == "baseline":
            block = baseline_string_by_string(t, theta, n_qubits=spec.n_modes)
        elif t.kind == "single":
            block = compile_single_excitation(t, theta, n_qubits=spec.n_modes)
        else:
            block = _double_term_block(t, theta, spec.n_modes)
        gates.extend(block.gates)
    return Circuit(spec.n_modes, tuple(gates), {"op": f"uccsd_{scheduling}"})


def prepare_reference(occupied, n_modes: int) -> Circuit:
    """X gates writing the occupation bitstring onto |0...0>."""
    occ = sorted(int(m) for m in occupied)
    if len(set(occ)) != len(occ):
        raise EvolutionError("repeated mode in occupied list")
    for m in occ:
        if not 0 <= m < n_modes:
            raise EvolutionError(f"mode {m} outside register of {n_modes}")
    gates = tuple(Clifford1(m, "X") for m in occ)
    return Circuit(n_modes, gates, {"op": "reference_state"})


# --- Trotter step scheduling ------------------------------------------------------


def _controlled_window(t: ExcitationTerm) -> tuple[int, ...]:
    """Support of the control-free core strings: the MS window of variant a."""
    p, q = t.sub[0], t.sup[0]
    return tuple(m for m in range(p, q + 1) if m != t.control)


def fusion_groups(terms) -> tuple[tuple[ExcitationTerm, ...], ...]:
    """Partition excitation terms into shared-block groups, order-preserving.

    Doubles fuse when they occupy the same four-mode window; controlled
    singles fuse when both the excitation core and the effective MS window
    coincide (a control inside the core shrinks the window, so such terms
    never share a sandwich with outside-control partners).  Symmetrized and
    antisymmetrized terms never mix.
    """
    keyed: dict = {}
    order: list = []
    for pos, t in enumerate(terms):
        if t.kind == "double":
            key = ("double", t.modes, t.symmetrized)
        elif t.kind == "controlled_single":
            key = ("controlled", t.sub, t.sup, _controlled_window(t), t.symmetrized)
        else:
            key = ("solo", pos)
        if key not in keyed:
            keyed[key] = []
            order.append(key)
        keyed[key].append(t)
    return tuple(tuple(keyed[k]) for k in order)


def _fused_double_gates(group, dt: float, width: int) -> list[Gate]:
    window = group[0].modes
    symmetrized = group[0].symmetrized
    angles = [0.0, 0.0, 0.0]
    for t in group:
        twin = replace(t, symmetrized=False)
        wrap_sign = 1
        if symmetrized:
            _, wrap_sign = local_equivalence_conjugate(twin, window[0])
        slot, slot_sign = _double_slot(twin)
        angles[slot] += slot_sign * wrap_sign * t.coefficient * dt
    block = compile_double_block(*window, tuple(angles), n_qubits=width)
    if symmetrized:
        return [Clifford1(window[0], "S"), *block.gates, Clifford1(window[0], "SDG")]
    return list(block.gates)


def _controlled_member_circuit(t: ExcitationTerm, dt: float, width: int) -> Circuit:
    if t.symmetrized:
        return compile_symmetrized(t, dt, n_qubits=width)
    return compile_controlled_single(
        t.sub[0], t.sup[0], t.control, t.coefficient * dt, n_qubits=width
    )


def _fused_controlled_gates(group, dt: float, width: int) -> list[Gate]:
    """Splice the CRz rotations of same-core terms into one shared sandwich."""
    circuits = [_controlled_member_circuit(t, dt, width) for t in group]
    base = list(circuits[0].gates)
    skeleton = [g for g in base if not isinstance(g, CRz)]
    extras: list[Gate] = []
    for c in circuits[1:]:
        if [g for g in c.gates if not isinstance(g, CRz)] != skeleton:
            raise EvolutionError("fused controlled terms disagree on the sandwich")
        extras.extend(g for g in c.gates if isinstance(g, CRz))
    cut = next(
        i
        for i, g in enumerate(base)
        if isinstance(g, MS) and g.direction == "backward"
    )
    return base[:cut] + extras + base[cut:]


def _controlled_per_string_gates(t: ExcitationTerm, dt: float, width: int) -> list[Gate]:
    """Baseline lowering: one CRz sandwich per control-free core string."""
    twin = t
    angle = dt
    wrap: list[Gate] = []
    unwrap: list[Gate] = []
    if t.symmetrized:
        twin = replace(t, symmetrized=False)
        j = t.sub[0]
        _, sign = local_equivalence_conjugate(twin, j)
        angle = sign * dt
        wrap = [Clifford1(j, "S")]
        unwrap = [Clifford1(j, "SDG")]
    plain, _ = _controlled_halves(twin, width)
    gates = list(wrap)
    for o, c, s in _rotation_pairs(plain, twin.sub[0], twin.sup[0]):
        _, layer = _sandwich(
            width, s.support(), "xx", [(o, angle * c, s)], control=twin.control
        )
        gates.extend(layer)
    gates.extend(unwrap)
    return gates


def _single_term_gates(t: ExcitationTerm, dt: float, width: int, naive: bool) -> list[Gate]:
    """Baseline per-term lowering of one excitation."""
    if t.kind == "controlled_single":
        return _controlled_per_string_gates(t, dt, width)
    if naive:
        return list(baseline_string_by_string(t, dt, n_qubits=width).gates)
    if t.symmetrized:
        return list(compile_symmetrized(t, dt, n_qubits=width).gates)
    if t.kind == "single":
        return list(compile_single_excitation(t, dt, n_qubits=width).gates)
    if t.kind == "double":
        return list(_double_term_block(t, dt, width).gates)
    raise EvolutionError(f"cannot schedule kind {t.kind}")


def _parallel_group_gates(group, dt: float, width: int) -> list[Gate]:
    t = group[0]
    if t.kind == "double":
        return _fused_double_gates(group, dt, width)
    if t.kind == "controlled_single":
        return _fused_controlled_gates(group, dt, width)
    if t.kind == "single":
        if t.symmetrized:
            return list(compile_symmetrized(t, dt, n_qubits=width).gates)
        return list(compile_single_excitation(t, dt, n_qubits=width).gates)
    raise EvolutionError(f"cannot schedule kind {t.kind}")


def _diagonal_gates(terms: HamiltonianTerms, dt: float, width: int) -> list[Gate]:
    """Exact lowering of the commuting diagonal part: phase, Rz, Rzz."""
    phase = float(terms.constant)
    gates: list[Gate] = []
    for lt in terms.local_terms:
        for coeff, s in local_pauli(lt, width).terms:
            theta = float(coeff.real) * dt
            supp = s.support()
            if not supp:
                phase += float(coeff.real)
            elif len(supp) == 1:
                gates.append(Rz(supp[0], 2.0 * theta))
            else:
                gates.append(Rzz(supp[0], supp[1], 2.0 * theta))
    if phase * dt != 0.0:
        gates.insert(0, GlobalPhase(-phase * dt))
    return gates


def build_trotter_step(terms: HamiltonianTerms, cfg: TrotterConfig) -> Circuit:
    """One first-order Trotter factor of exp(-i dt H), phase-exact.

    The diagonal part comes first, then the excitation blocks in canonical
    term order; the parallelized schedule replaces each fused group with a
    shared block at the position of the group's first member.
    """
    if cfg.orbital_class == "real" and terms.reality != "real":
        raise EvolutionError("real-orbital scheduling needs a real Hamiltonian")
    width = terms.n_modes
    dt = cfg.time_step
    gates = _diagonal_gates(terms, dt, width)
    if cfg.scheduling == "parallelized":
        for group in fusion_groups(terms.excitation_terms):
            gates.extend(_parallel_group_gates(group, dt, width))
    else:
        naive = cfg.orbital_class == "complex"
        for t in terms.excitation_terms:
            gates.extend(_single_term_gates(t, dt, width, naive))
    return Circuit(width, tuple(gates), {"op": f"trotter_{cfg.scheduling}"})


def trotter_error_probe(terms: HamiltonianTerms, time_steps, scheduling: str = "parallelized"):
    """(dt, spectral distance to the exact propagator) per requested step."""
    if terms.n_modes > 10:
        raise EvolutionError(f"{terms.n_modes} modes exceed the probe cap of 10")
    h = dense_sum(terms.pauli_sum())
    evals, evecs = np.linalg.eigh(h)
    out = []
    for dt in time_steps:
        dt = float(dt)
        cfg = TrotterConfig(dt, orbital_class=terms.reality, scheduling=scheduling)
        u = circuit_unitary(build_trotter_step(terms, cfg)).matrix
        exact = (evecs * np.exp(-1j * dt * evals)) @ evecs.conj().T
        out.append((dt, float(np.linalg.norm(u - exact, 2))))
    return tuple(out)
