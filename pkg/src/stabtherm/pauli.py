"""Z-strings under CNOT conjugation.

A Z-string is a product of Pauli Z operators, stored as a bit mask over spin
indices. Conjugating a Z-string by a CNOT never produces X or Y factors or a
phase, so the mask is the whole state.

The canonical (concatenated repetition code) stabilizer labels each of its
``3**k`` spins by a trit string ``mu_k ... mu_0`` of length ``k + 1`` whose
first trit is always ``0``. Spin index and trit string are related by reading
the string in base 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .structures import SpinGraph

MAX_SYMBOLIC_SPINS = 3**7


@dataclass(frozen=True, order=True)
class ZString:
    mask: int = 0

    @classmethod
    def of(cls, *spins: int) -> "ZString":
        return cls.from_support(spins)

    @classmethod
    def from_support(cls, spins: Iterable[int]) -> "ZString":
        mask = 0
        for s in spins:
            if s < 0:
                raise ValueError(f"negative spin index {s}")
            mask ^= 1 << s
        return cls(mask)

    @property
    def support(self) -> tuple[int, ...]:
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    @property
    def weight(self) -> int:
        return self.mask.bit_count()

    def is_identity(self) -> bool:
        return self.mask == 0

    def __contains__(self, spin: int) -> bool:
        return bool((self.mask >> spin) & 1)

    def __mul__(self, other: "ZString") -> "ZString":
        return ZString(self.mask ^ other.mask)

    def __repr__(self) -> str:
        if not self.mask:
            return "ZString(I)"
        return "ZString(" + " ".join(f"Z{s}" for s in self.support) + ")"


@dataclass(frozen=True)
class ZHamiltonian:
    """``H = -J * sum(terms)`` with J = 1."""

    num_spins: int
    terms: tuple[ZString, ...]

    def __post_init__(self):
        seen = set()
        limit = 1 << self.num_spins
        for t in self.terms:
            if t.mask in seen:
                raise ValueError(f"duplicate term {t}")
            if t.mask >= limit:
                raise ValueError(f"term {t} acts outside {self.num_spins} spins")
            seen.add(t.mask)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[ZString]:
        return iter(self.terms)

    @property
    def max_weight(self) -> int:
        return max((t.weight for t in self.terms), default=0)

    def supports(self) -> list[tuple[int, ...]]:
        return [t.support for t in self.terms]

    def to_text(self) -> str:
        return "".join(" ".join(map(str, t.support)) + "\n" for t in self.terms)

    @classmethod
    def from_text(cls, text: str, num_spins: int) -> "ZHamiltonian":
        terms = [ZString.from_support(int(s) for s in ln.split()) for ln in text.splitlines() if ln.strip()]
        return cls(num_spins, tuple(terms))


@dataclass(frozen=True)
class Circuit:
    """Ordered CNOT gates ``(control, target)``; the first gate acts first."""

    gates: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for c, t in self.gates:
            if c == t:
                raise ValueError(f"CNOT control equals target ({c})")

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        return Circuit(tuple(reversed(self.gates)))

    def to_text(self) -> str:
        return "".join(f"CNOT {c} {t}\n" for c, t in self.gates)

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        gates = []
        for ln in text.splitlines():
            parts = ln.split()
            if not parts:
                continue
            if parts[0] != "CNOT" or len(parts) != 3:
                raise ValueError(f"bad circuit line {ln!r}")
            gates.append((int(parts[1]), int(parts[2])))
        return cls(tuple(gates))


def conjugate_cnot(zs: ZString, c: int, t: int) -> ZString:
    """Conjugate ``zs`` by CNOT(c, t): the control flips iff the target is present."""
    if c == t:
        raise ValueError(f"CNOT control equals target ({c})")
    if (zs.mask >> t) & 1:
        return ZString(zs.mask ^ (1 << c))
    return zs


def transform_operator(op: ZString, circuit: Circuit) -> ZString:
    mask = op.mask
    for c, t in circuit.gates:
        if (mask >> t) & 1:
            mask ^= 1 << c
    return ZString(mask)


def transform_strings(ops: Sequence[ZString], circuit: Circuit, num_spins: int) -> list[ZString]:
    """Conjugate many Z-strings at once.

    Works on the transposed representation: one integer per spin whose bits
    mark the operators containing that spin, so each gate is one XOR.
    """
    cols = [0] * num_spins
    for i, op in enumerate(ops):
        for s in op.support:
            cols[s] |= 1 << i
    for c, t in circuit.gates:
        cols[c] ^= cols[t]
    masks = [0] * len(ops)
    for s, col in enumerate(cols):
        i = 0
        while col:
            if col & 1:
                masks[i] |= 1 << s
            col >>= 1
            i += 1
    return [ZString(m) for m in masks]


def transform_hamiltonian(
    ham: ZHamiltonian, circuit: Circuit, max_spins: int = MAX_SYMBOLIC_SPINS
) -> ZHamiltonian:
    if ham.num_spins > max_spins:
        raise ValueError(f"{ham.num_spins} spins exceeds symbolic cap of {max_spins}")
    return ZHamiltonian(ham.num_spins, tuple(transform_strings(ham.terms, circuit, ham.num_spins)))


# -- two-body structures --------------------------------------------------


def build_graph_hamiltonian(graph: SpinGraph) -> ZHamiltonian:
    terms = [ZString.of(u, v) for u, v in graph.edges()]
    return ZHamiltonian(graph.num_spins, tuple(terms))


def tree_disentangler(graph: SpinGraph) -> Circuit:
    """Parent-controlled CNOTs, outermost depth layer first."""
    by_depth: dict[int, list[tuple[int, int]]] = {}
    for p, c in graph.tree_edges:
        by_depth.setdefault(graph.depth[p], []).append((p, c))
    gates: list[tuple[int, int]] = []
    for d in sorted(by_depth, reverse=True):
        gates += sorted(by_depth[d])
    return Circuit(tuple(gates))


# -- canonical stabilizer -------------------------------------------------


def trit_label(index: int, k: int) -> str:
    if not 0 <= index < 3**k:
        raise ValueError(f"spin index {index} out of range for level {k}")
    digits = []
    for _ in range(k):
        index, r = divmod(index, 3)
        digits.append(str(r))
    return "0" + "".join(reversed(digits))


def trit_index(label: str, k: int | None = None) -> int:
    _check_label(label, k)
    return int(label, 3)


def _check_label(label: str, k: int | None = None) -> None:
    if not label or any(ch not in "012" for ch in label):
        raise ValueError(f"malformed trit label {label!r}")
    if label[0] != "0":
        raise ValueError(f"trit label {label!r} must start with 0")
    if k is not None and len(label) != k + 1:
        raise ValueError(f"trit label {label!r} has length {len(label)}, expected {k + 1}")


def all_labels(k: int) -> list[str]:
    return [trit_label(i, k) for i in range(3**k)]


def logical_z(prefix: str, k: int) -> ZString:
    """``Z^(j)_prefix``: the product over every spin whose label starts with ``prefix``."""
    _check_label(prefix)
    j = k + 1 - len(prefix)
    if j < 0:
        raise ValueError(f"prefix {prefix!r} longer than a level-{k} label")
    size = 3**j
    return ZString(((1 << size) - 1) << (int(prefix, 3) * size))


def stabilizer_element(index: str, k: int) -> ZString:
    """``A^(j)_index`` with ``index = eta + x``; ``x = 0`` is the composite element."""
    _check_label(index)
    j = k + 2 - len(index)
    if not 1 <= j <= k:
        raise ValueError(f"stabilizer index {index!r} invalid for level {k}")
    eta, x = index[:-1], index[-1]
    if x == "0":
        return stabilizer_element(eta + "1", k) * stabilizer_element(eta + "2", k)
    return logical_z(eta + "0", k) * logical_z(eta + x, k)


def canonical_term_labels(k: int) -> list[str]:
    labels = []
    for j in range(1, k + 1):
        for v in range(3 ** (k - j)):
            eta = trit_label(v, k - j)
            labels += [eta + "1", eta + "2"]
    return labels


def build_canonical_hamiltonian(k: int) -> ZHamiltonian:
    if k < 0:
        raise ValueError(f"level must be non-negative, got {k}")
    terms = tuple(stabilizer_element(lab, k) for lab in canonical_term_labels(k))
    return ZHamiltonian(3**k, terms)


def canonical_disentangler(k: int) -> Circuit:
    """CNOTs per concatenation level, leaves first, both control directions.

    At level j each block's central sub-block root controls the roots of the
    two appended sub-blocks, then the roles are swapped.
    """
    gates: list[tuple[int, int]] = []
    for j in range(1, k + 1):
        step = 3 ** (j - 1)
        down, up = [], []
        for v in range(3 ** (k - j)):
            base = v * 3**j
            for x in (1, 2):
                down.append((base, base + x * step))
                up.append((base + x * step, base))
        gates += sorted(down) + sorted(up)
    return Circuit(tuple(gates))


def canonical_image_label(index: str, k: int) -> str:
    """Trit label of the singleton that ``A^(j)_{eta x}`` maps to (x in 1, 2)."""
    j = k + 2 - len(index)
    return index + "0" * (j - 1)


@dataclass(frozen=True)
class ZmuDecomposition:
    """``Z_mu`` written as the logical operator times stabilizer elements."""

    level: int
    logical: bool
    elements: tuple[str, ...]

    def product(self) -> ZString:
        out = logical_z("0", self.level) if self.logical else ZString()
        for idx in self.elements:
            out = out * stabilizer_element(idx, self.level)
        return out


def zmu_decompose(mu: str, k: int) -> ZmuDecomposition:
    """Express the single-spin ``Z_mu`` through ``Z^k_0`` and one element per level."""
    _check_label(mu, k)
    elements = []
    for j in range(k, 0, -1):
        # mu_k ... mu_j followed by the 1<->2 swapped trit mu_{j-1}
        head = mu[: k - j + 1]
        swapped = str((2 * int(mu[k - j + 1])) % 3)
        elements.append(head + swapped)
    return ZmuDecomposition(k, True, tuple(elements))


def effective_distance(mu: str, nu: str, k: int) -> int:
    """Closed-form count of independent Z factors in the image of ``Z_mu Z_nu``."""
    _check_label(mu, k)
    _check_label(nu, k)
    if mu == nu:
        return 0
    m = next(i for i in range(k + 1) if mu[i] != nu[i])
    q = m - 1
    a, b = int(mu[m]), int(nu[m])
    last = 2 if a * b else 1
    return 2 * (k - q - 1) + mu[m + 1 :].count("0") + nu[m + 1 :].count("0") + last


def root_distance(mu: str, k: int) -> int:
    """Effective distance from the root, ``3k - 4L + zeros - 2``.

    ``L`` and ``zeros`` count over the trailing k trits (the mandatory
    leading zero excluded). The root itself is at distance 0.
    """
    _check_label(mu, k)
    tail = mu[1:]
    if tail.count("0") == k:
        return 0
    lead = len(tail) - len(tail.lstrip("0"))
    return 3 * k - 4 * lead + tail.count("0") - 2


def symbolic_distances(k: int) -> list[list[int]]:
    """Support size of the transformed ``Z_mu Z_nu`` for every label pair."""
    n = 3**k
    images = transform_strings([ZString.of(i) for i in range(n)], canonical_disentangler(k), n)
    return [[(images[a] * images[b]).weight for b in range(n)] for a in range(n)]
