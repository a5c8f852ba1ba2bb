"""Lowering Pauli rotations and excitation generators to MS-native circuits.

Every compiled block is a conjugation sandwich: a Clifford dressing layer, a
forward targeted MS gate, a set of commuting diagonal rotations, the backward
MS gate, and the inverted dressing.  Writing V for the dressing-plus-MS
prefix, an Rz(phi) on qubit t contributes exp(-i phi/2 V&dagger Z_t V), so the
whole art is picking the dressing such that the pulled-back Z strings hit the
target Pauli strings.  Signs are never tabulated by hand here: the pullback is
computed exactly over the Pauli group, the resulting +-1 is folded into the
rotation angle, and the dense-matrix oracle in the test suite checks the
product phase-exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from .circuit import (
    CNOT,
    CRz,
    Circuit,
    Clifford1,
    Gate,
    GlobalPhase,
    MS,
    Rz,
    inverse,
)
from .fermion import (
    ExcitationTerm,
    FermionError,
    controlled_single,
    double,
    generator_pauli,
    local_equivalence_conjugate,
)
from .pauli import (
    CLIFFORD1_NAMES,
    PauliString,
    conjugate_by_clifford,
    conjugate_by_ms,
)

__all__ = [
    "SynthesisError",
    "SynthesisPlan",
    "MS_SQUARE_TABLE",
    "ms_square_phase_exponent",
    "compile_pauli_rotation",
    "compile_single_excitation",
    "compile_double_block",
    "compile_coupled_exchange",
    "compile_controlled_single",
    "compile_higher_excitation",
    "compile_symmetrized",
    "baseline_string_by_string",
    "eliminate_backward_ms",
    "compile_mixed_cnot",
    "higher_order_ms_count",
]


class SynthesisError(ValueError):
    """Structural problem with a synthesis request."""


# Dressing words are searched over this alphabet in order, shortest first, so
# compiled circuits are reproducible gate for gate.
_ALPHABET = CLIFFORD1_NAMES  # ("H", "S", "SDG", "SX", "SXDG", "X", "Y", "Z")

_AXIS_LETTER = {"xx": "X", "yy": "Y"}


def _letter_perm(name: str) -> dict[str, str]:
    out = {}
    for letter in "XYZ":
        image = conjugate_by_clifford(PauliString(1, {0: letter}), name, (0,))
        out[letter] = image.letters[0]
    return out


# Sign-free letter action of each one-qubit Clifford, and of its inverse
# (the inverse action is what a dressing word applies under pullback).
_PUSH_PERM = {name: _letter_perm(name) for name in _ALPHABET}
_PULL_PERM = {
    name: {v: k for k, v in perm.items()} for name, perm in _PUSH_PERM.items()
}


@dataclass(frozen=True)
class SynthesisPlan:
    """One MS-pair layer: window, dressing and signed rotation angles.

    ``rz_assignments`` maps rotation qubits to their final signed angles; the
    (-1)^m factor the MS conjugation introduces on an n = 2m (+1) window is
    already folded in, never absorbed silently elsewhere.  ``control`` is set
    when the rotations are emitted as CRz gates, ``zz_rotations`` holds
    multi-qubit diagonal rotations (realized as CNOT ladders around an Rz).
    """

    qubit_window: tuple[int, ...]
    parity: int
    axis: str
    rz_assignments: tuple[tuple[int, float], ...]
    dressing: tuple[Gate, ...]
    control: int | None = None
    zz_rotations: tuple[tuple[tuple[int, ...], float], ...] = ()

    def __post_init__(self) -> None:
        window = tuple(self.qubit_window)
        if sorted(set(window)) != list(window):
            raise SynthesisError(f"window must be sorted and duplicate-free: {window}")
        object.__setattr__(self, "qubit_window", window)
        n = len(window)
        if self.parity != n // 2:
            raise SynthesisError(f"parity {self.parity} inconsistent with window size {n}")
        if self.axis not in ("xx", "yy"):
            raise SynthesisError(f"axis must be 'xx' or 'yy', got {self.axis!r}")
        rz = tuple((int(q), float(a)) for q, a in self.rz_assignments)
        object.__setattr__(self, "rz_assignments", rz)
        qubits = [q for q, _ in rz]
        if len(set(qubits)) != len(qubits):
            raise SynthesisError("duplicate rotation qubit in plan")
        if not set(qubits) <= set(window):
            raise SynthesisError(f"rotation qubits {qubits} outside window {window}")
        if len(rz) > n:
            raise SynthesisError("more rotations than window qubits")
        if self.control is not None and self.control in window:
            raise SynthesisError("control qubit must sit outside the MS window")

    @property
    def angles(self) -> dict[int, float]:
        return dict(self.rz_assignments)


# --- exact Heisenberg transport ----------------------------------------------

def _push(gate: Gate, s: PauliString) -> PauliString:
    """Image g s g&dagger; for the Clifford gates synthesis emits."""
    if isinstance(gate, Clifford1):
        return conjugate_by_clifford(s, gate.name, (gate.qubit,))
    if isinstance(gate, CNOT):
        return conjugate_by_clifford(s, "CNOT", (gate.control, gate.target))
    if isinstance(gate, MS):
        return conjugate_by_ms(s, gate.axis, gate.qubits, inverse=gate.direction == "backward")
    raise SynthesisError(f"cannot transport a Pauli through {gate!r}")


def _pullback(s: PauliString, gates) -> PauliString:
    """V&dagger; s V for the circuit prefix ``gates`` (time order)."""
    for gate in reversed(tuple(gates)):
        s = _push(inverse(gate), s)
    return s


def _sign_against(e: PauliString, target: PauliString) -> float:
    if e.letters != target.letters:
        raise SynthesisError(
            f"dressing failed: pulled back {e.label()}, wanted letters of {target.label()}"
        )
    ratio = e.phase / target.phase
    if ratio == 1:
        return 1.0
    if ratio == -1:
        return -1.0
    raise SynthesisError(f"non-real phase ratio {ratio} against {target.label()}")


# --- local dressing search -----------------------------------------------------

def _solve_letter_word(rows: dict[str, str]) -> tuple[str, ...]:
    """Shortest Clifford word whose pullback maps each base letter as asked."""
    for length in range(4):
        for word in itertools.product(_ALPHABET, repeat=length):
            mapping = {letter: letter for letter in "XYZ"}
            for name in word:
                pull = _PULL_PERM[name]
                mapping = {L: mapping[pull[L]] for L in "XYZ"}
            if all(mapping[b] == t for b, t in rows.items()):
                return word
    raise SynthesisError(f"no dressing word of length <= 3 realizes {rows}")


def _local_dressing(
    width: int,
    window: tuple[int, ...],
    axis: str,
    requests,
) -> list[Gate]:
    """Per-qubit Clifford words turning MS-conjugated Z's into the targets."""
    bases = {}
    for t, _, _ in requests:
        z = PauliString(width, {t: "Z"})
        bases[t] = conjugate_by_ms(z, axis, window, inverse=True) if len(window) > 1 else z
    rows: dict[int, dict[str, str]] = {k: {} for k in window}
    for t, _, target in requests:
        base = bases[t]
        for k in window:
            b, want = base.letter(k), target.letter(k)
            if want == "I":
                raise SynthesisError(f"target {target.label()} is identity on window qubit {k}")
            seen = rows[k].setdefault(b, want)
            if seen != want:
                raise SynthesisError(
                    f"conflicting dressing rows at qubit {k}: {b} -> {seen} and {b} -> {want}"
                )
    gates: list[Gate] = []
    for k in window:
        for name in _solve_letter_word(rows[k]):
            gates.append(Clifford1(k, name))
    return gates


# --- entangled dressing (tableau reduction) -----------------------------------

def _reduce_to_z(strings, targets, width: int) -> list[Gate]:
    """Clifford gates whose conjugation maps strings[i] to +-Z on targets[i].

    Standard symplectic elimination: purify the X-part, funnel it onto the
    target qubit with CNOTs, rotate it into Z, then cancel the leftover Z's.
    Earlier targets are never disturbed because a commuting independent family
    carries no X on them and CNOT controls preserve their Z.
    """
    gates: list[Gate] = []
    cur = [s.with_phase(1) for s in strings]

    def emit(gate: Gate) -> None:
        gates.append(gate)
        for i, s in enumerate(cur):
            cur[i] = _push(gate, s)

    done: list[int] = []
    for i, target in enumerate(targets):
        for qb in cur[i].support():
            if cur[i].letter(qb) == "Y":
                emit(Clifford1(qb, "S"))
        if not any(cur[i].letter(qb) == "X" for qb in cur[i].support()):
            free = [qb for qb in cur[i].support() if qb not in done]
            if not free:
                raise SynthesisError("strings are not independent; cannot diagonalize jointly")
            emit(Clifford1(free[0], "H"))
        if cur[i].letter(target) != "X":
            pivot = next(qb for qb in cur[i].support() if cur[i].letter(qb) == "X")
            emit(CNOT(pivot, target))
            emit(CNOT(target, pivot))
            emit(CNOT(pivot, target))
        for qb in cur[i].support():
            if qb != target and cur[i].letter(qb) == "X":
                emit(CNOT(target, qb))
        if cur[i].letter(target) == "Y":
            emit(Clifford1(target, "S"))
        emit(Clifford1(target, "H"))
        for qb in cur[i].support():
            if qb != target and cur[i].letter(qb) == "Z":
                emit(CNOT(qb, target))
        if cur[i].letters != {target: "Z"}:
            raise SynthesisError(f"reduction left {cur[i].label()} instead of Z[{target}]")
        done.append(target)
    for j, target in enumerate(done):
        if cur[j].letters != {target: "Z"}:
            raise SynthesisError("reduction disturbed an earlier pinned string")
    return gates


def _entangled_dressing(
    width: int,
    window: tuple[int, ...],
    axis: str,
    requests,
) -> list[Gate]:
    """Joint Clifford dressing for a layer local words cannot realize.

    Builds D with D s_i D&dagger; = +-(MS&dagger; Z_{t_i} MS), so the pullback
    of Z_{t_i} through [D, MS] lands on +-s_i.  Composed from two reductions
    onto the same Z targets.
    """
    targets = [t for t, _, _ in requests]
    layer = [s for _, _, s in requests]
    bases = [
        conjugate_by_ms(PauliString(width, {t: "Z"}), axis, window, inverse=True)
        for t in targets
    ]
    to_z_from_layer = _reduce_to_z(layer, targets, width)
    to_z_from_bases = _reduce_to_z(bases, targets, width)
    return to_z_from_layer + [inverse(g) for g in reversed(to_z_from_bases)]


# --- the sandwich assembler ----------------------------------------------------

def _zz_ladder(qubits: tuple[int, ...], angle: float) -> list[Gate]:
    ladder = [CNOT(qubits[i], qubits[i + 1]) for i in range(len(qubits) - 1)]
    return [*ladder, Rz(qubits[-1], angle), *[inverse(g) for g in reversed(ladder)]]


def _sandwich(
    width: int,
    window,
    axis: str,
    requests,
    *,
    dressing: list[Gate] | None = None,
    control: int | None = None,
    keep_zero: bool = True,
    zz_requests=(),
) -> tuple[SynthesisPlan, list[Gate]]:
    """One dressed MS pair realizing exp(-i sum_t 2 w_t S_t) rotations.

    ``requests`` is a sequence of (rotation qubit, weight, target string); the
    emitted Rz angle is 2 * weight * sign with the sign read off the exact
    pullback, i.e. exp(-i angle/2 E_t) == exp(-i weight S_t) per rotation.
    With ``control`` set the rotations become CRz and each contributes the
    (S_t - Z_control S_t)/2 pair at twice the angle.
    """
    window = tuple(sorted(window))
    n = len(window)
    if dressing is None:
        dressing = _local_dressing(width, window, axis, requests)
    prefix: list[Gate] = list(dressing)
    if n > 1:
        prefix.append(MS(axis, "forward", window))

    rz_entries: list[tuple[int, float]] = []
    for t, weight, target in requests:
        e = _pullback(PauliString(width, {t: "Z"}), prefix)
        sign = _sign_against(e, target)
        factor = 4.0 if control is not None else 2.0
        angle = factor * weight * sign
        if not keep_zero and angle == 0.0:
            continue
        rz_entries.append((t, angle))
    rz_entries.sort()

    zz_entries: list[tuple[tuple[int, ...], float]] = []
    for qs, weight, target in zz_requests:
        qs = tuple(sorted(qs))
        e = _pullback(PauliString(width, {q: "Z" for q in qs}), prefix)
        sign = _sign_against(e, target)
        zz_entries.append((qs, 2.0 * weight * sign))

    plan = SynthesisPlan(
        qubit_window=window,
        parity=n // 2,
        axis=axis,
        rz_assignments=tuple(rz_entries),
        dressing=tuple(dressing),
        control=control,
        zz_rotations=tuple(zz_entries),
    )

    gates: list[Gate] = list(prefix)
    for q, angle in rz_entries:
        gates.append(CRz(control, q, angle) if control is not None else Rz(q, angle))
    for qs, angle in zz_entries:
        gates.extend(_zz_ladder(qs, angle))
    if n > 1:
        gates.append(MS(axis, "backward", window))
    gates.extend(inverse(g) for g in reversed(dressing))
    return plan, gates


# --- generator pools ------------------------------------------------------------

def _pool(terms_with_angles, width: int):
    """Combined real-weighted string pool of commuting generators.

    Returns (weights keyed by letter maps, strings by key, letter modes,
    interior Z letters, window).
    """
    weights: dict[frozenset, float] = {}
    strings: dict[frozenset, PauliString] = {}
    modes = None
    interior: dict[int, str] = {}
    for term, theta in terms_with_angles:
        t_modes = term.letter_modes
        if modes is None:
            modes = t_modes
        elif modes != t_modes:
            raise SynthesisError(f"terms mix letter modes {modes} and {t_modes}")
        for coeff, s in generator_pauli(term, width).terms:
            if abs(coeff.imag) > 1e-12:
                raise SynthesisError(f"non-real generator weight {coeff} on {s.label()}")
            key = frozenset(s.letters.items())
            weights[key] = weights.get(key, 0.0) + theta * coeff.real
            strings[key] = s
            for qb, letter in s.letters.items():
                if qb not in modes:
                    if interior.setdefault(qb, letter) != letter or letter != "Z":
                        raise SynthesisError("inconsistent parity letters in pool")
    if modes is None:
        raise SynthesisError("empty generator pool")
    window = tuple(sorted((*modes, *interior)))
    return weights, strings, modes, interior, window


def _star_target(width, modes, interior, center: str, flipped: str, at: int) -> PauliString:
    letters = {m: (flipped if m == at else center) for m in modes}
    letters.update(interior)
    return PauliString(width, letters)


def _basis_insert(basis: dict[int, int], v: int) -> bool:
    """Gaussian insert into an F2 basis keyed by leading bit; False if dependent."""
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            basis[lead] = v
            return True
        v ^= basis[lead]
    return False


def _pack_words(words: list[int], capacity: int) -> list[list[int]]:
    """First-fit packing into layers of independent words.

    A subset of equal-weight-X strings multiplies to the identity exactly when
    it has even size and its Y-patterns XOR to zero, so appending a parity bit
    to each word makes "no such subset" the same as F2 linear independence.
    """
    layers: list[list[int]] = []
    bases: list[dict[int, int]] = []
    for w in sorted(words):
        for layer, basis in zip(layers, bases):
            if len(layer) < capacity and _basis_insert(basis, (w << 1) | 1):
                layer.append(w)
                break
        else:
            layers.append([w])
            bases.append({})
            _basis_insert(bases[-1], (w << 1) | 1)
    return layers


def _excitation_layers(
    terms_with_angles,
    width: int,
    *,
    keep_zero: bool = True,
    axis: str = "xx",
) -> tuple[list[SynthesisPlan], list[Gate]]:
    """Star layers plus, where local words cannot pack the pool, CNOT layers.

    The first layer diagonalizes the strings one letter away from the all-X
    (or all-Y) word using purely local dressing; the complementary star covers
    the strings one letter from the opposite center.  Whatever remains (N >= 3
    only) is grouped into independent commuting sets of up to 2N strings, each
    diagonalized jointly with CNOT-assisted dressing around a single MS pair.
    """
    weights, strings, modes, interior, window = _pool(terms_with_angles, width)
    plans: list[SynthesisPlan] = []
    gates: list[Gate] = []
    covered: set[frozenset] = set()

    star_axes = (axis, {"xx": "yy", "yy": "xx"}[axis])
    for star_axis in star_axes:
        center = _AXIS_LETTER[star_axis]
        flipped = "Y" if center == "X" else "X"
        requests = []
        star_keys = []
        for o in modes:
            target = _star_target(width, modes, interior, center, flipped, o)
            key = frozenset(target.letters.items())
            star_keys.append(key)
            requests.append((o, weights.get(key, 0.0), target))
        if all(k in covered for k in star_keys):
            continue
        plan, layer_gates = _sandwich(
            width, window, star_axis, requests, keep_zero=keep_zero
        )
        plans.append(plan)
        gates.extend(layer_gates)
        covered.update(star_keys)

    remaining = [k for k in weights if k not in covered]
    if remaining:
        index = {m: i for i, m in enumerate(modes)}

        def word_of(key: frozenset) -> int:
            w = 0
            for qb, letter in key:
                if qb in index and letter == "Y":
                    w |= 1 << index[qb]
            return w

        by_word = {word_of(k): k for k in remaining}
        for layer_words in _pack_words(list(by_word), 2 * len(modes)):
            requests = []
            for i, w in enumerate(layer_words):
                key = by_word[w]
                requests.append((modes[i], weights[key], strings[key]))
            dressing = _entangled_dressing(width, window, "xx", requests)
            plan, layer_gates = _sandwich(
                width, window, "xx", requests, dressing=dressing, keep_zero=keep_zero
            )
            plans.append(plan)
            gates.extend(layer_gates)
    return plans, gates


# --- public compilers -----------------------------------------------------------

def _register_width(modes, n_qubits: int | None) -> int:
    need = max(modes) + 1
    if n_qubits is None:
        return need
    if n_qubits < need:
        raise SynthesisError(f"register of {n_qubits} qubits cannot hold mode {max(modes)}")
    return n_qubits


def _expect_antisym(t: ExcitationTerm, kind: str) -> None:
    if t.kind != kind:
        raise SynthesisError(f"expected a {kind} term, got {t.kind}")
    if t.symmetrized:
        raise SynthesisError("symmetrized terms go through compile_symmetrized")


def compile_pauli_rotation(p: PauliString, phi: float) -> Circuit:
    """exp(-i phi/2 p) as one dressed MS pair (none when p is one-local)."""
    if p.is_identity():
        raise SynthesisError("identity rotation is a global phase; use GlobalPhase")
    if p.phase not in (1, -1):
        raise SynthesisError(f"rotation about an anti-Hermitian string (phase {p.phase})")
    signed_phi = float(phi) * (1 if p.phase == 1 else -1)
    target = p.with_phase(1)
    support = target.support()
    rotation_qubit = support[0]
    requests = [(rotation_qubit, signed_phi / 2.0, target)]
    _, gates = _sandwich(p.width, support, "xx", requests)
    return Circuit(p.width, gates, {"op": "pauli_rotation"})


def compile_single_excitation(
    t: ExcitationTerm, theta: float, axis: str = "xx", n_qubits: int | None = None
) -> Circuit:
    """exp(-i theta G) for a single excitation, two MS gates on [p, q]."""
    _expect_antisym(t, "single")
    axis = axis.lower()
    if axis not in ("xx", "yy"):
        raise SynthesisError(f"axis must be 'xx' or 'yy', got {axis!r}")
    width = _register_width(t.modes, n_qubits)
    _, gates = _excitation_layers([(t, float(theta))], width, axis=axis)
    return Circuit(width, gates, {"op": "single_excitation"})


def compile_double_block(
    p: int, q: int, r: int, s: int, angles, n_qubits: int | None = None
) -> Circuit:
    """Three commuting double-excitation exponentials over one window.

    ``angles`` carries the rotation angle of each orbital pairing, ordered
    ((p,q)(r,s), (p,r)(q,s), (p,s)(q,r)); the shared eight-string pool is
    realized with one XX and one YY MS pair regardless of how many pairings
    are active.
    """
    if not 0 <= p < q < r < s:
        raise SynthesisError(f"orbitals must be strictly increasing, got {(p, q, r, s)}")
    angles = tuple(float(a) for a in angles)
    if len(angles) != 3:
        raise SynthesisError("double block takes three pairing angles")
    pairs = [double(p, q, r, s), double(p, r, q, s), double(p, s, q, r)]
    width = _register_width((p, q, r, s), n_qubits)
    _, gates = _excitation_layers(list(zip(pairs, angles)), width)
    return Circuit(width, gates, {"op": "double_block"})


def compile_coupled_exchange(
    p: int, q: int, r: int, s: int, theta: float, n_qubits: int | None = None
) -> Circuit:
    """exp(-i theta (G_pq^rs + G_ps^rq)); two of the four Rz slots cancel."""
    if not 0 <= p < q < r < s:
        raise SynthesisError(f"orbitals must be strictly increasing, got {(p, q, r, s)}")
    terms = [(double(p, q, r, s), float(theta)), (double(p, s, r, q), float(theta))]
    width = _register_width((p, q, r, s), n_qubits)
    _, gates = _excitation_layers(terms, width, keep_zero=False)
    return Circuit(width, gates, {"op": "coupled_exchange"})


def _controlled_halves(t: ExcitationTerm, width: int):
    """Split the controlled generator pool by the control-qubit letter."""
    plain: list[tuple[float, PauliString]] = []
    dressed: list[tuple[float, PauliString]] = []
    for coeff, s in generator_pauli(t, width).terms:
        (dressed if s.letter(t.control) == "Z" else plain).append((coeff.real, s))
    return plain, dressed


def _rotation_pairs(entries, p: int, q: int):
    """Assign the string with the Y letter at each orbital to that orbital."""
    out = []
    for o in (p, q):
        match = [(c, s) for c, s in entries if s.letter(o) == "Y"]
        if len(match) != 1:
            raise SynthesisError("controlled pool does not split into Y-labelled halves")
        out.append((o, match[0][0], match[0][1]))
    return out


def _compile_controlled_term(t: ExcitationTerm, theta: float, variant: str, width: int):
    p, q, j = t.sub[0], t.sup[0], t.control
    plain, dressed = _controlled_halves(t, width)
    if variant == "a":
        requests = [(o, float(theta) * c, s) for o, c, s in _rotation_pairs(plain, p, q)]
        window = requests[0][2].support()
        _, gates = _sandwich(width, window, "xx", requests, control=j)
        return gates
    if variant == "b":
        gates: list[Gate] = []
        for half in (dressed, plain):
            requests = [(o, float(theta) * c, s) for o, c, s in _rotation_pairs(half, p, q)]
            window = requests[0][2].support()
            _, layer = _sandwich(width, window, "xx", requests)
            gates.extend(layer)
        return gates
    raise SynthesisError(f"variant must be 'a' or 'b', got {variant!r}")


def compile_controlled_single(
    p: int, q: int, j: int, theta: float, variant: str = "a", n_qubits: int | None = None
) -> Circuit:
    """exp(-i theta G_pj^qj): an excitation p -> q gated on occupation of j.

    Variant "a" keeps one MS pair and conditions the rotations with CRz gates
    from the control qubit, which never joins the MS set. Variant "b" spends a
    second MS pair to realize the two commuting halves with plain Rz gates.
    """
    if not (0 <= p < q) or j < 0:
        raise SynthesisError(f"need 0 <= p < q and a valid control, got {(p, q, j)}")
    if j in (p, q):
        raise SynthesisError("control mode coincides with the excitation; that is a density term")
    try:
        t = controlled_single(p, q, j)
    except FermionError as exc:
        raise SynthesisError(str(exc)) from exc
    width = _register_width((p, q, j), n_qubits)
    gates = _compile_controlled_term(t, theta, variant, width)
    return Circuit(width, gates, {"op": f"controlled_single_{variant}"})


def higher_order_ms_count(order: int) -> int:
    """MS budget for an order-N excitation: 2 * ceil(2^(2N-2) / N)."""
    if order < 1:
        raise SynthesisError("excitation order must be at least 1")
    return 2 * math.ceil(4 ** (order - 1) / order)


def compile_higher_excitation(
    t: ExcitationTerm, theta: float, n_qubits: int | None = None
) -> Circuit:
    """exp(-i theta G) for an order-N excitation within the MS budget.

    Orders one and two come out as the single- and double-excitation sandwich
    structures; from order three the string pool no longer packs into local
    star layers (six of them cover at most 30 of the 32 third-order strings),
    so the remaining layers carry CNOT-assisted dressing while each still
    spends exactly one MS pair.
    """
    _expect_antisym(t, "higher")
    width = _register_width(t.modes, n_qubits)
    plans, gates = _excitation_layers([(t, float(theta))], width)
    budget = higher_order_ms_count(len(t.sub))
    spent = 2 * len(plans)
    if spent != budget:
        raise SynthesisError(f"packing used {spent} MS gates, budget is {budget}")
    return Circuit(width, gates, {"op": "higher_excitation"})


def compile_symmetrized(
    t: ExcitationTerm,
    theta: float,
    n_qubits: int | None = None,
    conjugation_mode: int | None = None,
) -> Circuit:
    """exp(-i theta G~) by S-conjugating the antisymmetrized circuit.

    The phase gate exp(-i pi/2 n_j) swaps the generator families, so the
    symmetrized exponential is the antisymmetrized one wrapped in S_j / S_j
    dagger with the angle sign set by whether j is a creation or annihilation
    mode (``conjugation_mode`` picks j; default is the first creation mode).
    """
    if not t.symmetrized:
        raise SynthesisError("term is already antisymmetrized; compile it directly")
    twin = replace(t, symmetrized=False)
    j = t.sub[0] if conjugation_mode is None else conjugation_mode
    image, sign = local_equivalence_conjugate(twin, j)
    if not image.symmetrized:
        raise SynthesisError(f"mode {j} does not couple to the generator")
    width = _register_width(t.modes, n_qubits)
    inner_theta = sign * float(theta)
    if twin.kind == "single":
        inner = compile_single_excitation(twin, inner_theta, n_qubits=width)
    elif twin.kind == "controlled_single":
        inner = Circuit(width, _compile_controlled_term(twin, inner_theta, "a", width))
    elif twin.kind in ("double", "higher"):
        _, gates = _excitation_layers([(twin, inner_theta)], width)
        inner = Circuit(width, gates)
    else:  # pragma: no cover - the kinds above are exhaustive
        raise SynthesisError(f"cannot compile kind {twin.kind}")
    gates = [Clifford1(j, "S"), *inner.gates, Clifford1(j, "SDG")]
    return Circuit(width, gates, {"op": "symmetrized"})


def baseline_string_by_string(
    t: ExcitationTerm, theta: float, n_qubits: int | None = None
) -> Circuit:
    """Reference compiler: every generator string gets its own MS pair."""
    width = _register_width(t.modes, n_qubits)
    gates: list[Gate] = []
    for coeff, s in generator_pauli(t, width).terms:
        if abs(coeff.imag) > 1e-12:
            raise SynthesisError(f"non-real generator weight {coeff}")
        block = compile_pauli_rotation(s, 2.0 * float(theta) * coeff.real)
        gates.extend(block.gates)
    return Circuit(width, gates, {"op": "baseline"})


# The squared forward MS gate is a Pauli word times a phase; this table maps
# the window size n to (k, pauli) with MS^2 = i^k * P, where P is the axis
# letter on every window qubit when ``pauli`` and the identity otherwise.
# Regenerated by the dense-matrix test; do not edit by hand.
MS_SQUARE_TABLE: dict[int, tuple[int, bool]] = {
    1: (0, False),
    2: (3, True),
    3: (1, False),
    4: (2, True),
    5: (2, False),
    6: (1, True),
    7: (3, False),
    8: (0, True),
}


def ms_square_phase_exponent(n: int) -> tuple[int, bool]:
    """(k, pauli) with the squared n-qubit forward MS equal to i^k times
    the all-axis-letter word (pauli True) or the identity (pauli False)."""
    m = n // 2
    if n % 2 == 0:
        return (-m) % 4, True
    return m % 4, False


def eliminate_backward_ms(c: Circuit) -> Circuit:
    """Rewrite backward MS gates as forward ones plus local Pauli dressing.

    Uses MS&dagger; = conj(phase) * P * MS from the squared-gate identity, so
    the output reproduces the input unitary exactly once the inserted
    GlobalPhase is counted; MS totals are preserved and the pass is a no-op
    on forward-only circuits.
    """
    gates: list[Gate] = []
    changed = False
    for gate in c.gates:
        if not (isinstance(gate, MS) and gate.direction == "backward"):
            gates.append(gate)
            continue
        changed = True
        n = len(gate.qubits)
        k, pauli = ms_square_phase_exponent(n)
        gates.append(MS(gate.axis, "forward", gate.qubits))
        if pauli:
            letter = _AXIS_LETTER[gate.axis]
            gates.extend(Clifford1(qb, letter) for qb in gate.qubits)
        gamma = ((-k) % 4) * math.pi / 2.0
        if gamma % (2.0 * math.pi) != 0.0:
            gates.append(GlobalPhase(gamma))
    if not changed:
        return c
    return Circuit(c.n_qubits, gates, c.metadata)


def compile_mixed_cnot(t: ExcitationTerm, theta: float, n_qubits: int | None = None) -> Circuit:
    """Double excitation with one MS pair; the second family via CNOT ladders.

    The strings one letter away from the all-X word keep their plain Rz slots;
    each remaining string is the product of three of those, so it is reached
    from the same sandwich by a three-local Z rotation on the orbitals, spent
    as a CNOT ladder around an Rz.
    """
    _expect_antisym(t, "double")
    width = _register_width(t.modes, n_qubits)
    weights, strings, modes, interior, window = _pool([(t, float(theta))], width)
    requests = []
    zz_requests = []
    for o in modes:
        one_y = _star_target(width, modes, interior, "X", "Y", o)
        requests.append((o, weights.get(frozenset(one_y.letters.items()), 0.0), one_y))
        one_x = _star_target(width, modes, interior, "Y", "X", o)
        triple = tuple(m for m in modes if m != o)
        zz_requests.append((triple, weights.get(frozenset(one_x.letters.items()), 0.0), one_x))
    _, gates = _sandwich(width, window, "xx", requests, zz_requests=zz_requests)
    return Circuit(width, gates, {"op": "mixed_cnot"})
