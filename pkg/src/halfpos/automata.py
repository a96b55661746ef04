"""Deterministic (and nondeterministic) Buchi automata with transition-based
acceptance, plus the basic structural algorithms: runs, safe words, safe-cycle
components, saturation, re-rooting, and the plain-text automaton format.

All objects are immutable after construction and all operations are pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ContractError, InputError, InternalError

Word = tuple[str, ...]


class Alphabet:
    """Ordered finite set of colors (opaque string tokens)."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if not syms:
            raise InputError("alphabet must be non-empty")
        if len(set(syms)) != len(syms):
            raise InputError(f"duplicate symbols in alphabet: {syms}")
        for s in syms:
            if not s or any(ch.isspace() for ch in s) or s in ("#", "|", "*"):
                raise InputError(f"bad alphabet symbol: {s!r}")
        self.symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)})"

    def index_of(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise InputError(f"unknown symbol {symbol!r} (alphabet: {list(self.symbols)})") from None

    def word(self, text: str) -> Word:
        """Parse a word; single-character alphabets allow dense strings like "aba"."""
        text = text.strip()
        if not text:
            return ()
        if any(ch.isspace() for ch in text):
            parts = tuple(text.split())
        elif all(len(s) == 1 for s in self.symbols):
            parts = tuple(text)
        else:
            parts = (text,)
        for p in parts:
            if p not in self._index:
                raise InputError(f"unknown symbol {p!r} in word {text!r}")
        return parts

    def format_word(self, word: Sequence[str]) -> str:
        if all(len(s) == 1 for s in self.symbols):
            return "".join(word)
        return " ".join(word)


@dataclass(frozen=True)
class Lasso:
    """Finite representation prefix . cycle^omega of an ultimately periodic word."""

    prefix: Word
    cycle: Word

    def __post_init__(self) -> None:
        if len(self.cycle) < 1:
            raise InputError("lasso cycle must be non-empty")

    def colors(self, length: int) -> Word:
        """First `length` colors of the denoted infinite word."""
        out = list(self.prefix)
        while len(out) < length:
            out.extend(self.cycle)
        return tuple(out[:length])

    def normalize(self) -> "Lasso":
        """Minimal representation of the same infinite word: the cycle is
        reduced to its primitive root and trailing prefix colors that merely
        repeat the cycle are folded into it."""
        cycle = list(self.cycle)
        for period in range(1, len(cycle)):
            if len(cycle) % period == 0 and cycle == cycle[:period] * (len(cycle) // period):
                cycle = cycle[:period]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = [cycle[-1]] + cycle[:-1]
        return Lasso(tuple(prefix), tuple(cycle))

    def render(self, alphabet: Alphabet) -> str:
        return f"{alphabet.format_word(self.prefix)}|{alphabet.format_word(self.cycle)}"

    @staticmethod
    def parse(alphabet: Alphabet, text: str) -> "Lasso":
        if "|" not in text:
            raise InputError(f"lasso must look like 'prefix|cycle', got {text!r}")
        pre, _, cyc = text.partition("|")
        return Lasso(alphabet.word(pre), alphabet.word(cyc))


class Dba:
    """Complete deterministic Buchi automaton with transition-based acceptance.

    States are dense integer ids; human-readable names live in a side table.
    Every state is reachable from `init` (unreachable states are pruned at
    construction).  `buchi` holds (state, color-index) pairs.
    """

    __slots__ = ("alphabet", "names", "init", "delta", "buchi")

    def __init__(
        self,
        alphabet: Alphabet,
        delta: Sequence[Sequence[int]],
        buchi: Iterable[tuple[int, int]],
        init: int = 0,
        names: Sequence[str] | None = None,
    ):
        n = len(delta)
        if n == 0:
            raise InputError("automaton needs at least one state")
        if not (0 <= init < n):
            raise InputError(f"initial state {init} out of range")
        k = len(alphabet)
        for q, row in enumerate(delta):
            if len(row) != k:
                raise InputError(f"state {q} must have one transition per color")
            for target in row:
                if not (0 <= target < n):
                    raise InputError(f"transition target {target} out of range")
        buchi_set = frozenset(buchi)
        for (q, ci) in buchi_set:
            if not (0 <= q < n and 0 <= ci < k):
                raise InputError(f"accepting mark ({q},{ci}) outside the transition table")
        if names is None:
            names = tuple(f"q{q}" for q in range(n))
        else:
            names = tuple(names)
            if len(names) != n or len(set(names)) != n:
                raise InputError("state names must be distinct, one per state")

        keep = _reachable(delta, init, k)
        if len(keep) != n:
            remap = {old: new for new, old in enumerate(keep)}
            delta = [[remap[delta[old][ci]] for ci in range(k)] for old in keep]
            buchi_set = frozenset((remap[q], ci) for (q, ci) in buchi_set if q in remap)
            names = tuple(names[old] for old in keep)
            init = remap[init]

        self.alphabet = alphabet
        self.names = names
        self.init = init
        self.delta = tuple(tuple(row) for row in delta)
        self.buchi = buchi_set

    @property
    def n(self) -> int:
        return len(self.delta)

    def state_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown state name {name!r}") from None

    def is_buchi(self, q: int, ci: int) -> bool:
        return (q, ci) in self.buchi

    def transitions(self) -> Iterator[tuple[int, int, int]]:
        """All (state, color-index, target) triples in a fixed order."""
        for q, row in enumerate(self.delta):
            for ci, target in enumerate(row):
                yield (q, ci, target)

    def word(self, text: str) -> Word:
        return self.alphabet.word(text)

    def same_structure(self, other: "Dba") -> bool:
        return (
            self.alphabet == other.alphabet
            and self.delta == other.delta
            and self.init == other.init
            and self.buchi == other.buchi
        )

    def with_buchi(self, buchi: Iterable[tuple[int, int]]) -> "Dba":
        return Dba(self.alphabet, self.delta, buchi, self.init, self.names)

    def __repr__(self) -> str:
        return f"Dba({self.n} states, {len(self.buchi)} accepting marks, init={self.names[self.init]})"

    @staticmethod
    def build(
        symbols: Iterable[str],
        transitions: Mapping[tuple[str, str], tuple[str, bool]],
        init: str,
    ) -> "Dba":
        """Assemble a DBA from named transitions (state, color) -> (target, accepting)."""
        alphabet = Alphabet(symbols)
        names: list[str] = []
        seen: set[str] = set()
        for (src, _), (dst, _) in transitions.items():
            for s in (src, dst):
                if s not in seen:
                    seen.add(s)
                    names.append(s)
        if init not in seen:
            raise InputError(f"initial state {init!r} has no transitions")
        index = {s: i for i, s in enumerate(names)}
        k = len(alphabet)
        delta = [[-1] * k for _ in names]
        buchi = set()
        for (src, color), (dst, accepting) in transitions.items():
            ci = alphabet.index_of(color)
            delta[index[src]][ci] = index[dst]
            if accepting:
                buchi.add((index[src], ci))
        for s, row in zip(names, delta):
            for ci, target in enumerate(row):
                if target < 0:
                    raise InputError(f"missing transition ({s}, {alphabet.symbols[ci]})")
        return Dba(alphabet, delta, buchi, index[init], names)


def _reachable(delta: Sequence[Sequence[int]], init: int, k: int) -> list[int]:
    seen = {init}
    order = [init]
    stack = [init]
    while stack:
        q = stack.pop()
        for ci in range(k):
            t = delta[q][ci]
            if t not in seen:
                seen.add(t)
                order.append(t)
                stack.append(t)
    order.sort()
    return order


# ---------------------------------------------------------------------------
# Runs and safe words


def run_state(dba: Dba, q: int, word: Sequence[str]) -> int:
    """State reached by reading `word` from `q` (the empty word stays put)."""
    for c in word:
        q = dba.delta[q][dba.alphabet.index_of(c)]
    return q


def is_safe(dba: Dba, q: int, word: Sequence[str]) -> bool:
    """True iff the run of `word` from `q` crosses no accepting transition."""
    for c in word:
        ci = dba.alphabet.index_of(c)
        if (q, ci) in dba.buchi:
            return False
        q = dba.delta[q][ci]
    return True


# ---------------------------------------------------------------------------
# Safe components and saturation


def tarjan_scc(n: int, successors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components, returned in topological order.

    Iterative Tarjan; components are listed so that every edge goes from an
    earlier component to the same or a later one, and each component's states
    are sorted.  Deterministic for fixed input.
    """
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            succ = successors[v]
            while pi < len(succ):
                w = succ[pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    sccs.reverse()
    return sccs


def alpha_free_components(dba: Dba) -> list[tuple[frozenset[int], frozenset[tuple[int, int]]]]:
    """SCCs of the structure with accepting transitions removed.

    Each entry pairs a component's states with the non-accepting transitions
    (state, color-index) internal to it.  Components come in topological order.
    """
    k = len(dba.alphabet)
    succ = [
        sorted({dba.delta[q][ci] for ci in range(k) if (q, ci) not in dba.buchi})
        for q in range(dba.n)
    ]
    comps = tarjan_scc(dba.n, succ)
    out = []
    for comp in comps:
        members = frozenset(comp)
        edges = frozenset(
            (q, ci)
            for q in comp
            for ci in range(k)
            if (q, ci) not in dba.buchi and dba.delta[q][ci] in members
        )
        out.append((members, edges))
    return out


def saturate(dba: Dba) -> Dba:
    """Enlarge the accepting set to every transition outside a safe component.

    Preserves the recognized language, is idempotent, and yields the unique
    maximal accepting set for this structure.
    """
    internal: set[tuple[int, int]] = set()
    for _, edges in alpha_free_components(dba):
        internal.update(edges)
    full = {(q, ci) for q in range(dba.n) for ci in range(len(dba.alphabet))}
    return dba.with_buchi(full - internal)


def is_saturated(dba: Dba) -> bool:
    return saturate(dba).buchi == dba.buchi


def extend_to_safe_cycle(dba: Dba, q: int, word: Sequence[str]) -> Word:
    """Shortest completion w' such that word . w' is a safe cycle on `q`.

    Requires a saturated automaton and a safe `word`; BFS inside the safe
    component, exploring colors in alphabet order, so the completion is the
    lexicographically-least shortest one.
    """
    if not is_saturated(dba):
        raise ContractError("extend_to_safe_cycle requires a saturated automaton")
    if not is_safe(dba, q, word):
        raise ContractError(f"word {list(word)} is not safe from state {dba.names[q]}")
    start = run_state(dba, q, word)
    k = len(dba.alphabet)
    if start == q:
        return ()
    parent: dict[int, tuple[int, int]] = {start: (-1, -1)}
    queue = [start]
    while queue:
        nxt: list[int] = []
        for x in queue:
            for ci in range(k):
                if (x, ci) in dba.buchi:
                    continue
                y = dba.delta[x][ci]
                if y in parent:
                    continue
                parent[y] = (x, ci)
                if y == q:
                    path: list[str] = []
                    cur = y
                    while cur != start:
                        px, pci = parent[cur]
                        path.append(dba.alphabet.symbols[pci])
                        cur = px
                    return tuple(reversed(path))
                nxt.append(y)
        queue = nxt
    raise InternalError(
        f"no safe return from {dba.names[start]} to {dba.names[q]} in a saturated automaton"
    )


def residual(dba: Dba, q: int) -> Dba:
    """The same automaton re-rooted at `q` (unreachable states pruned)."""
    return Dba(dba.alphabet, dba.delta, dba.buchi, q, dba.names)


# ---------------------------------------------------------------------------
# Text format
#
# One automaton per file.  Header lines, then one line per transition; a
# trailing '*' marks an accepting transition.  '#' starts a comment.
#
#   alphabet: a b
#   states: 3
#   init: 0
#   names: q_init q_a q_aa     (optional)
#   0 a 1 *
#   0 b 0


def parse_dba(text: str) -> Dba:
    alphabet: Alphabet | None = None
    n_states: int | None = None
    init: int | None = None
    names: tuple[str, ...] | None = None
    rows: list[list[int]] = []
    buchi: set[tuple[int, int]] = set()
    filled: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("alphabet:"):
                alphabet = Alphabet(line.split(":", 1)[1].split())
            elif line.startswith("states:"):
                n_states = int(line.split(":", 1)[1])
                if n_states < 1:
                    raise InputError("need at least one state")
                rows = [[-1] * (len(alphabet) if alphabet else 0) for _ in range(n_states)]
            elif line.startswith("init:"):
                init = int(line.split(":", 1)[1])
            elif line.startswith("names:"):
                names = tuple(line.split(":", 1)[1].split())
            else:
                if alphabet is None or n_states is None:
                    raise InputError("transition before alphabet/states headers")
                parts = line.split()
                if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "*"):
                    raise InputError(f"bad transition line: {raw.strip()!r}")
                q, color, target = int(parts[0]), parts[1], int(parts[2])
                ci = alphabet.index_of(color)
                if not (0 <= q < n_states and 0 <= target < n_states):
                    raise InputError(f"state id out of range in: {raw.strip()!r}")
                if (q, ci) in filled:
                    raise InputError(f"duplicate transition for state {q} on {color!r}")
                filled.add((q, ci))
                rows[q][ci] = target
                if len(parts) == 4:
                    buchi.add((q, ci))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None

    if alphabet is None:
        raise InputError("missing 'alphabet:' header")
    if n_states is None:
        raise InputError("missing 'states:' header")
    if init is None:
        raise InputError("missing 'init:' header")
    if not (0 <= init < n_states):
        raise InputError(f"init {init} out of range")
    for q in range(n_states):
        for ci in range(len(alphabet)):
            if rows[q][ci] < 0:
                raise InputError(
                    f"missing transition for state {q} on {alphabet.symbols[ci]!r}"
                )
    return Dba(alphabet, rows, buchi, init, names)


def format_dba(dba: Dba) -> str:
    lines = [
        f"alphabet: {' '.join(dba.alphabet.symbols)}",
        f"states: {dba.n}",
        f"init: {dba.init}",
    ]
    if dba.names != tuple(f"q{q}" for q in range(dba.n)):
        lines.append(f"names: {' '.join(dba.names)}")
    for q, ci, target in dba.transitions():
        mark = " *" if (q, ci) in dba.buchi else ""
        lines.append(f"{q} {dba.alphabet.symbols[ci]} {target}{mark}")
    return "\n".join(lines) + "\n"
