"""Cover-set dispatch: the endgame used once no geodesic, 1-ball or larger
ball holds many vertices of ``X``.

Cops stand on random subsets ``C_1..C_t`` of ``X``.  When the robber's start
``r0`` is known, the levels ``A_i`` / ``D_i`` are computed from it and each
vertex of ``D_i`` receives, through a Hall matching, a cop from ``C_{i-1}``
that walks there and stays.  Vertex sets inside this module are bitmasks
where speed matters and ``frozenset`` at the API boundary.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..bounds import alpha_value, ceil_log2
from ..errors import DomainError, PreconditionError, RetryBudgetExhausted, SizeLimitError
from ..game import CopStrategy, Observation, ProtectionCertificate, Trace, robber_positions_by_step
from ..graph import Graph, components_after_removal, geodesic_between, open_neighborhood_of_set

MAX_RETRIES = 32
CLAIM_CHECK_LIMIT = 16
LEVEL_SEARCH_LIMIT = 20


def _mask(vertices) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def _members(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _pop(mask: int) -> int:
    return bin(mask).count("1")


class _Balls:
    """Cached ``B(v, radius)`` bitmasks."""

    def __init__(self, g: Graph) -> None:
        self.g = g
        self._cache: dict[tuple[int, int], int] = {}

    def of(self, v: int, radius: int) -> int:
        key = (v, radius)
        m = self._cache.get(key)
        if m is None:
            m = 0
            for u, d in enumerate(self.g.distance_row(v)):
                if 0 <= d <= radius:
                    m |= 1 << u
            self._cache[key] = m
        return m

    def of_set(self, mask: int, radius: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= self.of(low.bit_length() - 1, radius)
            mask ^= low
        return out


# ---------------------------------------------------------------------------
# cover sets

@dataclass
class CoverSets:
    sets: list[frozenset[int]]
    k: int
    d: int
    t: int
    alpha: float
    seed: int
    probability: Fraction
    x: frozenset[int]
    resample_count: list[int] = field(default_factory=list)
    first_sizes: list[int] = field(default_factory=list)
    size_bound_enforced: bool = True

    @property
    def size_bound(self) -> Fraction:
        return Fraction(len(self.x), self.k * self.t)

    def __getitem__(self, i: int) -> frozenset[int]:
        """``C_i`` with 1-based ``i``."""
        return self.sets[i - 1]


def level_count(k: int, d: int) -> int:
    return ceil_log2(2 * d * k)


def sample_cover_sets(x, k: int, d: int, alpha_override: float | None = None, seed: int = 0,
                      probability_override: Fraction | float | None = None,
                      max_retries: int = MAX_RETRIES) -> CoverSets:
    """Draw ``C_1..C_t``: every vertex of ``x`` joins ``C_i`` with probability
    ``1/(2kt)``; a draw larger than ``|x|/(kt)`` is redrawn (at most
    ``max_retries`` times).  A probability override switches the size bound off."""
    x = frozenset(x)
    if k < 2 or d < 2:
        raise DomainError("cover sets need k, d >= 2")
    if not x:
        raise PreconditionError("cover sets need a nonempty X")
    t = level_count(k, d)
    alpha = alpha_value(k, d, max(len(x), 2)) if alpha_override is None else alpha_override
    if probability_override is None:
        prob = Fraction(1, 2 * k * t)
        if prob >= 1:
            raise DomainError("inclusion probability 1/(2kt) must be below 1")
    else:
        prob = Fraction(probability_override).limit_denominator(10**9)
        if not 0 <= prob <= 1:
            raise DomainError("probability override must lie in [0, 1]")
    rng = random.Random(seed)
    order = sorted(x)
    cs = CoverSets([], k, d, t, alpha, seed, prob, x, size_bound_enforced=probability_override is None)
    for _ in range(t):
        tries = 0
        while True:
            drawn = frozenset(v for v in order if rng.random() < prob)
            if tries == 0:
                cs.first_sizes.append(len(drawn))
            if not cs.size_bound_enforced or len(drawn) * k * t <= len(x):
                break
            tries += 1
            if tries > max_retries:
                raise RetryBudgetExhausted(f"no C_i within |X|/(kt) after {max_retries} redraws")
        cs.sets.append(drawn)
        cs.resample_count.append(tries)
    return cs


def resample_level(cs: CoverSets, i: int, rng: random.Random, max_retries: int = MAX_RETRIES) -> None:
    """Redraw ``C_i`` in place (used when a Hall matching into it fails)."""
    order = sorted(cs.x)
    tries = 0
    while True:
        drawn = frozenset(v for v in order if rng.random() < cs.probability)
        if not cs.size_bound_enforced or len(drawn) * cs.k * cs.t <= len(cs.x):
            break
        tries += 1
        if tries > max_retries:
            raise RetryBudgetExhausted("redraw of a cover set kept exceeding |X|/(kt)")
    cs.sets[i - 1] = drawn
    cs.resample_count[i - 1] += 1 + tries


def claim_property_check(g: Graph, x, cs: CoverSets, i: int) -> tuple[bool, frozenset[int] | None]:
    """Check, over every nonempty ``Y ⊆ x``: if ``|B(Y, 2^i+d) ∩ x| >= αk|Y|``
    then ``|B(Y, 2^i+d) ∩ C_i| >= |Y|``.  Returns ``(ok, first violating Y)``
    in order of the bitmask over sorted ``x``."""
    xs = sorted(frozenset(x))
    if len(xs) > CLAIM_CHECK_LIMIT:
        raise SizeLimitError(f"claim check limited to |X| <= {CLAIM_CHECK_LIMIT}")
    if not 1 <= i <= cs.t:
        raise PreconditionError(f"level {i} outside [1, {cs.t}]")
    radius = 2**i + cs.d
    balls = _Balls(g)
    xmask = _mask(xs)
    cmask = _mask(cs[i])
    per = [balls.of(v, radius) for v in xs]
    ak = cs.alpha * cs.k
    size = len(xs)
    union = [0] * (1 << size)
    for sub in range(1, 1 << size):
        low = sub & -sub
        union[sub] = union[sub ^ low] | per[low.bit_length() - 1]
        y = _pop(sub)
        if _pop(union[sub] & xmask) >= ak * y and _pop(union[sub] & cmask) < y:
            return False, frozenset(xs[j] for j in range(size) if sub >> j & 1)
    return True, None


# ---------------------------------------------------------------------------
# adaptive levels

@dataclass
class LevelParams:
    k: int
    d: int
    t: int
    alpha: float


@dataclass
class AdaptiveLevels:
    r0: int
    params: LevelParams
    a: dict[int, frozenset[int]]
    dsets: dict[int, frozenset[int]]
    n: dict[int, frozenset[int]]
    phi: dict[int, dict[int, int]] = field(default_factory=dict)
    log: list[str] = field(default_factory=list)

    @property
    def top(self) -> int:
        return self.params.t + 1

    @property
    def empty_at_top(self) -> bool:
        return not self.a[self.top]

    def radius(self, i: int) -> int:
        """``2^(i-1) + d``: the deadline step of level ``i`` and its ball radius."""
        return 2 ** (i - 1) + self.params.d

    def pool(self, g: Graph, x, i: int) -> frozenset[int]:
        """``B(A_{i-1}, 2^(i-2)+d) ∩ X`` for ``i >= 2``."""
        return frozenset(ball_of(g, self.a[i - 1], 2 ** (i - 2) + self.params.d)) & frozenset(x)


def ball_of(g: Graph, vertices, radius: int) -> frozenset[int]:
    b = _Balls(g)
    return _members(b.of_set(_mask(vertices), radius))


def _feasible(balls: _Balls, xmask: int, amask: int, radius: int, ak: float) -> bool:
    return _pop(balls.of_set(amask, radius) & xmask) <= ak * _pop(amask)


def maximal_level_set(balls: _Balls, xmask: int, pool: int, radius: int, ak: float) -> tuple[int, list[str]]:
    """Inclusion-wise maximal ``A ⊆ pool`` with ``|B(A, radius) ∩ X| <= ak|A|``.

    Ascending-id single additions first; then any nonempty feasible
    ``Y ⊆ pool \\ A`` (smallest first) is merged, which keeps ``A`` feasible
    because the ball sizes are subadditive.  The loop ends when no feasible
    ``Y`` remains, which is exactly inclusion-wise maximality.
    """
    log = []
    amask = 0
    members = sorted(_members(pool))
    while True:
        grew = True
        while grew:
            grew = False
            for v in members:
                if amask >> v & 1:
                    continue
                if _feasible(balls, xmask, amask | (1 << v), radius, ak):
                    amask |= 1 << v
                    grew = True
        rest = sorted(_members(pool & ~amask))
        if len(rest) > LEVEL_SEARCH_LIMIT:
            raise SizeLimitError(f"maximal-set search over {len(rest)} candidates")
        extra = _smallest_feasible_subset(balls, xmask, rest, radius, ak)
        if extra is None:
            return amask, log
        log.append(f"merged subset {sorted(_members(extra))} that no single vertex reached")
        amask |= extra


def _smallest_feasible_subset(balls, xmask, rest, radius, ak) -> int | None:
    for size in range(2, len(rest) + 1):
        for combo in itertools.combinations(rest, size):
            m = _mask(combo)
            if _feasible(balls, xmask, m, radius, ak):
                return m
    return None


def build_adaptive_levels(g: Graph, x, r0: int, params: LevelParams, balls: _Balls | None = None) -> AdaptiveLevels:
    """``A_1 = B(r0, 2d+1) ∩ X``, ``D_1 = ∅``; for ``i = 2..t+1`` ``A_i`` is a
    maximal feasible subset of ``B(A_{i-1}, 2^(i-2)+d) ∩ X`` and ``D_i`` the rest."""
    g._check(r0)
    x = frozenset(x)
    balls = balls or _Balls(g)
    xmask = _mask(x)
    ak = params.alpha * params.k
    d = params.d
    a = {1: balls.of(r0, 2 * d + 1) & xmask}
    dsets = {1: 0}
    nsets = {1: a[1]}
    dunion = 0
    log = []
    for i in range(2, params.t + 2):
        pool = balls.of_set(a[i - 1], 2 ** (i - 2) + d) & xmask
        a[i], notes = maximal_level_set(balls, xmask, pool, 2 ** (i - 1) + d, ak)
        log.extend(f"level {i}: {n}" for n in notes)
        dsets[i] = pool & ~a[i]
        dunion |= dsets[i]
        nsets[i] = a[i] | dunion
    lv = AdaptiveLevels(r0, params, {i: _members(m) for i, m in a.items()},
                        {i: _members(m) for i, m in dsets.items()},
                        {i: _members(m) for i, m in nsets.items()}, log=log)
    return lv


def level_invariant_problems(g: Graph, x, lv: AdaptiveLevels, full_audit: bool = True) -> list[str]:
    """Re-check the level laws directly from the definitions."""
    x = frozenset(x)
    out = []
    p = lv.params
    ak = p.alpha * p.k
    for i in range(2, lv.top + 1):
        pool = lv.pool(g, x, i)
        if lv.a[i] | lv.dsets[i] != pool or lv.a[i] & lv.dsets[i]:
            out.append(f"level {i}: A and D do not partition the pool")
        rad = lv.radius(i)

        def ok(s):
            return len(ball_of(g, s, rad) & x) <= ak * len(s)

        if not ok(lv.a[i]):
            out.append(f"level {i}: A violates the ball constraint")
        for z in sorted(lv.dsets[i]):
            if ok(lv.a[i] | {z}):
                out.append(f"level {i}: adding {z} keeps A feasible (not maximal)")
        if full_audit:
            rest = sorted(lv.dsets[i])
            if len(rest) <= LEVEL_SEARCH_LIMIT:
                for size in range(1, len(rest) + 1):
                    for combo in itertools.combinations(rest, size):
                        if ok(combo):
                            out.append(f"level {i}: subset {combo} of D is feasible")
                            break
    for i in range(1, lv.top):
        if not lv.n[i] <= lv.n[i + 1]:
            out.append(f"N_{i} not inside N_{i + 1}")
    for i, phi in lv.phi.items():
        if len(set(phi.values())) != len(phi):
            out.append(f"phi_{i} not injective")
        for v, c in phi.items():
            if g.dist(v, c) > lv.radius(i):
                out.append(f"phi_{i}({v}) = {c} too far")
    return out


# ---------------------------------------------------------------------------
# Hall matching

@dataclass
class HallResult:
    matching: dict[int, int] | None
    deficient: frozenset[int] | None = None
    neighborhood: frozenset[int] | None = None

    @property
    def ok(self) -> bool:
        return self.matching is not None


def hall_match(g: Graph, d_set, c_set, radius: int) -> HallResult:
    """Saturate ``d_set`` into ``c_set`` along pairs at distance ``<= radius``
    (augmenting paths, vertices scanned in ascending id).  On failure the
    result carries a Hall violator ``Y`` with ``|N(Y)| < |Y|``."""
    left = sorted(frozenset(d_set))
    right = sorted(frozenset(c_set))
    adj = {}
    for v in left:
        row = g.distance_row(v)
        adj[v] = [c for c in right if 0 <= row[c] <= radius]
    owner: dict[int, int] = {}

    def augment(v, seen):
        for c in adj[v]:
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = v
                return True
        return False

    for v in left:
        if not augment(v, set()):
            # alternating reachability from the unmatched v gives the violator
            ys, cs = {v}, set()
            stack = [v]
            while stack:
                u = stack.pop()
                for c in adj[u]:
                    if c not in cs:
                        cs.add(c)
                        w = owner[c]
                        if w not in ys:
                            ys.add(w)
                            stack.append(w)
            return HallResult(None, frozenset(ys), frozenset(cs))
    return HallResult({v: c for c, v in owner.items()})


# ---------------------------------------------------------------------------
# the dispatch strategy

@dataclass
class DispatchTable:
    """Per robber start: which cop walks where."""

    levels: dict[int, AdaptiveLevels]
    routes: dict[int, tuple[tuple[int, ...], ...]]  # r0 -> one route per cop


class CoverDispatchStrategy(CopStrategy):
    """Cops start on the cover sets (cop ids ordered by level, then vertex).

    After seeing ``r0`` every matched cop walks along a geodesic to its
    ``D_i`` vertex and stays; the others never move.  State: ``("init",)``
    then ``("run", r0, elapsed)`` with ``elapsed`` capped at the longest route.
    """

    def __init__(self, graph: Graph, x, cover: CoverSets, table: DispatchTable) -> None:
        self.cover = cover
        self.x = frozenset(x)
        self.table = table
        self.cops_at = [(i, v) for i in range(1, cover.t + 1) for v in sorted(cover[i])]
        super().__init__(graph, len(self.cops_at))
        self.longest = max((len(r) - 1 for rs in table.routes.values() for r in rs), default=0)

    @property
    def complete(self) -> bool:
        """Every robber start leaves ``A_{t+1}`` empty."""
        return all(lv.empty_at_top for lv in self.table.levels.values())

    def initial_placements(self):
        return tuple(v for _, v in self.cops_at)

    def initial_state(self):
        return ("init",)

    def transition(self, state, obs: Observation):
        if state[0] == "init":
            r0, elapsed = obs.robber, 0
        else:
            _, r0, elapsed = state
        elapsed = min(elapsed + 1, self.longest)
        routes = self.table.routes[r0]
        moved = tuple(r[min(elapsed, len(r) - 1)] for r in routes)
        return moved, ("run", r0, elapsed)

    def threshold(self) -> int:
        return 2 ** self.cover.t + self.cover.d + 1

    def certificate(self) -> ProtectionCertificate | None:
        if not self.complete or not self.x:
            return None
        return ProtectionCertificate(self.x, self.n_cops, self.threshold())


def build_dispatch_table(g: Graph, x, cover: CoverSets, params: LevelParams,
                         seed: int = 0, max_retries: int = MAX_RETRIES) -> DispatchTable:
    """Levels and matchings for every possible robber start.

    A failed matching into ``C_{i-1}`` redraws that set (at most
    ``max_retries`` times per level) and restarts the table.
    """
    x = frozenset(x)
    balls = _Balls(g)
    rng = random.Random(f"hall-{seed}")
    levels = {r0: build_adaptive_levels(g, x, r0, params, balls) for r0 in g.vertices()}
    redraws = {i: 0 for i in range(1, cover.t + 1)}
    while True:
        failed = None
        for r0 in g.vertices():
            lv = levels[r0]
            lv.phi = {}
            for i in range(2, lv.top + 1):
                res = hall_match(g, lv.dsets[i], cover[i - 1], lv.radius(i))
                if not res.ok:
                    failed = i - 1
                    break
                lv.phi[i] = res.matching
            if failed is not None:
                break
        if failed is None:
            break
        redraws[failed] += 1
        if redraws[failed] > max_retries:
            raise RetryBudgetExhausted(f"Hall matching into C_{failed} failed after {max_retries} redraws")
        resample_level(cover, failed, rng)
    cops_at = [(i, v) for i in range(1, cover.t + 1) for v in sorted(cover[i])]
    slot = {c: j for j, c in enumerate(cops_at)}
    routes = {}
    for r0, lv in levels.items():
        rs = [(v,) for _, v in cops_at]
        for i, phi in lv.phi.items():
            for dv, cv in phi.items():
                rs[slot[(i - 1, cv)]] = geodesic_between(g, cv, dv).vertices
        routes[r0] = tuple(rs)
    return DispatchTable(levels, routes)


def confinement_problems(g: Graph, x, strategy: CoverDispatchStrategy, trace: Trace) -> list[str]:
    """Check properties (A)/(B) against a recorded game: at the end of step
    ``2^(i-1)+d`` a robber on ``X`` is in ``A_i``; otherwise its component of
    ``G - X`` has its whole neighbourhood inside ``N_i``."""
    x = frozenset(x)
    where = robber_positions_by_step(trace)
    if 0 not in where:
        return ["trace has no robber placement"]
    lv = strategy.table.levels[where[0]]
    comps = {}
    for comp in components_after_removal(g, x):
        for v in comp:
            comps[v] = comp
    out = []
    for i in range(1, lv.top + 1):
        step = lv.radius(i)
        if step not in where or (trace.captured and trace.capture_step is not None and trace.capture_step <= step):
            continue
        r = where[step]
        if r in x:
            if r not in lv.a[i]:
                out.append(f"step {step}: robber on {r} outside A_{i}")
        else:
            if not open_neighborhood_of_set(g, comps[r]) <= lv.n[i]:
                out.append(f"step {step}: component of {r} escapes N_{i}")
    return out
