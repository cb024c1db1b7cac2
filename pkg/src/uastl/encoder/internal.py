"""Enumerative backend: DAG shapes by size, windows and thresholds searched per shape.

A *shape* is a syntax DAG whose predicate nodes ("slots") carry a family but
no threshold and whose temporal nodes carry a window variable but no window.
Shapes of size ``1..n`` are enumerated in node-numbering order and
deduplicated by their tree unfolding (with slot and window identities). For
each shape every assignment of concrete windows is evaluated at once along a
batch axis, and thresholds are optimized per window assignment.

Threshold optimization for a shape with one slot is exact:

* interval objective, slot used with one polarity: every per-entry term is
  ``t_e(0) ± c``, so the optimum has a closed form;
* interval objective, mixed polarity: the objective is piecewise linear with
  kinks only at midpoints of pairs of data values, all of which are tried;
* point objective: each sample's correctness only changes at its own data
  values, so one representative per piece plus an event sweep over all
  samples gives the exact count for every threshold.

Shapes with several slots use coordinate ascent over the same
one-dimensional solvers (exact per coordinate, not globally).
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..formula import (
    Always,
    And,
    Eventually,
    Formula,
    Implies,
    Not,
    Or,
    TimeWindow,
    Top,
    Until,
)
from ..grammar import PredicateGrammar, linear_range
from .encoding import Encoding
from .external import SolverTimeout
from .model import SolverModel, encode_assignment

INF = math.inf
TEMPORAL_OPS = ("F", "G", "U")


@dataclass(frozen=True)
class SkNode:
    op: str
    kids: tuple = ()
    fam: int | None = None
    slot: int | None = None
    win: int | None = None  # window variable of a temporal node


@dataclass
class Shape:
    nodes: tuple
    key: str
    slots: list = field(default_factory=list)  # node index of each slot
    parity: list = field(default_factory=list)  # polarities per slot
    nwin: int = 0

    @property
    def size(self) -> int:
        return len(self.nodes)

    def slot_family(self, s: int) -> int:
        return self.nodes[self.slots[s]].fam

    def to_formula(self, grammar: PredicateGrammar, windows, thresholds) -> Formula:
        """Concrete formula; ``windows[v] = (a, b)`` for window variable ``v``."""
        built: list[Formula] = []
        for nd in self.nodes:
            k = [built[i] for i in nd.kids]
            w = TimeWindow(*map(int, windows[nd.win])) if nd.win is not None else None
            if nd.op == "p":
                f = grammar.families[nd.fam].instantiate(float(thresholds[nd.slot]))
            elif nd.op == "top":
                f = Top()
            elif nd.op == "not":
                f = Not(k[0])
            elif nd.op == "F":
                f = Eventually(w, k[0])
            elif nd.op == "G":
                f = Always(w, k[0])
            elif nd.op == "U":
                f = Until(w, k[0], k[1])
            else:
                f = {"and": And, "or": Or, "imp": Implies}[nd.op](k[0], k[1])
            built.append(f)
        return built[-1]


def _finish(nodes: list[SkNode]) -> Shape:
    """Number slots and window variables by first occurrence; build the key."""
    slot_of: dict[int, int] = {}
    win_of: dict[int, int] = {}
    parity: dict[int, set] = {}

    def walk(i: int, par: int) -> str:
        nd = nodes[i]
        if nd.op == "p":
            slot_of.setdefault(i, len(slot_of))
            parity.setdefault(i, set()).add(par)
            return f"p{nd.fam}#{slot_of[i]}"
        if nd.op == "top":
            return "T"
        if nd.op == "not":
            return f"!({walk(nd.kids[0], -par)})"
        if nd.op == "imp":
            return f"({walk(nd.kids[0], -par)} imp {walk(nd.kids[1], par)})"
        w = ""
        if nd.op in TEMPORAL_OPS:
            w = f"[w{win_of.setdefault(i, len(win_of))}]"
        if nd.op in ("F", "G"):
            return f"{nd.op}{w}({walk(nd.kids[0], par)})"
        return f"({walk(nd.kids[0], par)} {nd.op}{w} {walk(nd.kids[1], par)})"

    key = walk(len(nodes) - 1, 1)
    order = sorted(slot_of, key=slot_of.get)
    fixed = tuple(
        SkNode(nd.op, nd.kids, nd.fam, slot_of.get(i), win_of.get(i)) for i, nd in enumerate(nodes)
    )
    return Shape(fixed, key, order, [parity[i] for i in order], len(win_of))


def enumerate_shapes(size: int, families: int, allow_top: bool = True):
    """Numbered DAGs with exactly ``size`` nodes, all reachable from the last.

    Obvious redundancies are skipped: commutative operators take children in
    increasing order, idempotent ``and``/``or`` and double negation are left
    out (they equal smaller formulas).
    """
    leaves = [SkNode("p", fam=q) for q in range(families)]
    if allow_top:
        leaves.append(SkNode("top"))
    nodes: list[SkNode] = []
    parents = [0] * size

    def options(i):
        yield from leaves
        if i == 0:
            return
        for k in range(i):
            if nodes[k].op != "not":
                yield SkNode("not", (k,))
            yield SkNode("F", (k,))
            yield SkNode("G", (k,))
        for k, k2 in itertools.product(range(i), repeat=2):
            if k < k2:
                yield SkNode("and", (k, k2))
                yield SkNode("or", (k, k2))
            yield SkNode("imp", (k, k2))
            yield SkNode("U", (k, k2))

    def rec(i):
        if i == size:
            if all(parents[k] for k in range(size - 1)):
                yield list(nodes)
            return
        for nd in options(i):
            kids = set(nd.kids)
            for k in kids:
                parents[k] += 1
            orphans = sum(1 for k in range(i + 1) if not parents[k])
            # each later node can adopt at most one net orphan
            if orphans - 1 <= size - 1 - i:
                nodes.append(nd)
                yield from rec(i + 1)
                nodes.pop()
            for k in kids:
                parents[k] -= 1

    yield from rec(0)


def shapes_up_to(n: int, families: int):
    """Distinct shapes of size ``1..n``, smallest first."""
    seen: set[str] = set()
    for size in range(1, n + 1):
        for nodes in enumerate_shapes(size, families):
            sh = _finish(nodes)
            if sh.key in seen:
                continue
            if not sh.slots and size == n:
                continue  # node 1 must be a predicate
            seen.add(sh.key)
            yield sh


def all_windows(horizon: int) -> np.ndarray:
    """Every ``(a, b)`` with ``0 <= a < b <= horizon``, shape ``(K, 2)``."""
    return np.array([(a, b) for a in range(horizon) for b in range(a + 1, horizon + 1)], dtype=np.int64)


def count_concrete(shape: Shape, horizon: int) -> int:
    return len(all_windows(horizon)) ** shape.nwin


# -- batched evaluation -----------------------------------------------------------
#
# Rows index independent problems (window assignment x threshold candidate).
# Interval values have shape (B, E, T); point values (B, T + 1), where the last
# position stands for everything past the end of the trajectory.

def _gather(arr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """``arr[b, ..., idx[b, j]]`` for ``arr`` (B, ..., P) and ``idx`` (B, J)."""
    shape = arr.shape[:-1] + (idx.shape[-1],)
    ix = idx.reshape((idx.shape[0],) + (1,) * (arr.ndim - 2) + (idx.shape[-1],))
    return np.take_along_axis(arr, np.broadcast_to(ix, shape), axis=-1)


def _shift_rows(arr, a, hold: bool, fill):
    """``arr[r, ..., j + a_r]``, past-the-end positions held or filled."""
    P = arr.shape[-1]
    idx = np.arange(P)[None, :] + a[:, None]
    out = _gather(arr, np.minimum(idx, P - 1))
    if not hold:
        gone = (idx >= P).reshape((len(a),) + (1,) * (arr.ndim - 2) + (P,))
        out = np.where(gone, fill, out)
    return out


def _padded(arr, hold: bool, fill):
    """``arr`` followed by as many past-the-end positions, so shifts are slices."""
    P = arr.shape[-1]
    tail = arr[..., -1:] if hold else np.full(arr.shape[:-1] + (1,), fill, arr.dtype)
    return np.concatenate([arr, np.broadcast_to(tail, arr.shape[:-1] + (P,))], axis=-1)


def _windowed(kind, L, R, a, b, hold: bool, bool_mode: bool):
    """F/G/U over per-row windows ``[a_r, b_r)``.

    ``hold``: positions past the last index repeat it (point mode);
    otherwise they are dropped (interval mode, clipped windows).
    """
    P = L.shape[-1]
    width = (b - a).reshape((len(a),) + (1,) * (L.ndim - 1))
    steps = int(width.max())
    if bool_mode:
        lo_fill, hi_fill = False, True
    else:
        lo_fill, hi_fill = -INF, INF
    if kind == "U":
        SL = _padded(_shift_rows(L, a, hold, hi_fill), hold, hi_fill)
        SR = _padded(_shift_rows(R, a, hold, lo_fill), hold, lo_fill)
        out = np.full(L.shape, lo_fill)
        prefix = np.full(L.shape, hi_fill)
        for t in range(steps):
            valid = t < width
            rk, lk = SR[..., t:t + P], SL[..., t:t + P]
            if bool_mode:
                out = out | (valid & rk & prefix)
                prefix = prefix & (lk | ~valid)
            else:
                out = np.where(valid, np.maximum(out, np.minimum(rk, prefix)), out)
                prefix = np.where(valid, np.minimum(prefix, lk), prefix)
        return out
    fill = lo_fill if kind == "F" else hi_fill
    S = _padded(_shift_rows(L, a, hold, fill), hold, fill)
    out = S[..., :P]
    for t in range(1, steps):
        st = S[..., t:t + P]
        if bool_mode:
            out = out | (st & (t < width)) if kind == "F" else out & (st | (t >= width))
        else:
            out = np.where(t < width, (np.maximum if kind == "F" else np.minimum)(out, st), out)
    return out


def interval_eval(shape: Shape, lin, senses, wa, wb, thr):
    """Root worst/best robustness at position 0, each of shape ``(B, E)``.

    ``lin[q] = (lo, hi)`` hold family ``q``'s linear-form ranges per entry
    and position ``(E, T)``; ``wa``/``wb`` are ``(B, nwin)`` window bounds and
    ``thr`` is ``(B, slots)``.
    """
    shape_ = (len(wa),) + lin[0][0].shape
    lo_v, hi_v = [], []
    for nd in shape.nodes:
        if nd.op == "p":
            llo, lhi = lin[nd.fam]
            c = thr[:, nd.slot][:, None, None]
            if senses[nd.fam] == ">":
                lo, hi = llo[None] - c, lhi[None] - c
            else:
                lo, hi = c - lhi[None], c - llo[None]
        elif nd.op == "top":
            lo = hi = np.full(shape_, INF)
        else:
            x = nd.kids[0]
            if nd.op == "not":
                lo, hi = -hi_v[x], -lo_v[x]
            elif nd.op in ("and", "or"):
                f = np.minimum if nd.op == "and" else np.maximum
                y = nd.kids[1]
                lo, hi = f(lo_v[x], lo_v[y]), f(hi_v[x], hi_v[y])
            elif nd.op == "imp":
                y = nd.kids[1]
                lo, hi = np.maximum(-hi_v[x], lo_v[y]), np.maximum(-lo_v[x], hi_v[y])
            else:
                a, b = wa[:, nd.win], wb[:, nd.win]
                y = nd.kids[1] if nd.op == "U" else x
                lo = _windowed(nd.op, np.broadcast_to(lo_v[x], shape_), np.broadcast_to(lo_v[y], shape_), a, b, False, False)
                hi = _windowed(nd.op, np.broadcast_to(hi_v[x], shape_), np.broadcast_to(hi_v[y], shape_), a, b, False, False)
        lo_v.append(lo)
        hi_v.append(hi)
    return np.broadcast_to(lo_v[-1], shape_)[..., 0], np.broadcast_to(hi_v[-1], shape_)[..., 0]


def point_eval(shape: Shape, lin, senses, wa, wb, thr) -> np.ndarray:
    """Strong satisfaction at position 0 for rows ``lin[q]`` of shape ``(R, T)``."""
    s_v, w_v = [], []
    R = len(wa)
    T = next(iter(lin.values())).shape[1] if isinstance(lin, dict) else lin[0].shape[1]
    for nd in shape.nodes:
        if nd.op == "p":
            c = thr[:, nd.slot][:, None]
            holds = lin[nd.fam] > c if senses[nd.fam] == ">" else lin[nd.fam] < c
            s = np.concatenate([holds, np.zeros((R, 1), bool)], axis=1)
            w = np.concatenate([holds, np.ones((R, 1), bool)], axis=1)
        elif nd.op == "top":
            s = w = np.ones((R, T + 1), bool)
        else:
            x = nd.kids[0]
            if nd.op == "not":
                s, w = ~w_v[x], ~s_v[x]
            elif nd.op in ("and", "or"):
                f = np.logical_and if nd.op == "and" else np.logical_or
                y = nd.kids[1]
                s, w = f(s_v[x], s_v[y]), f(w_v[x], w_v[y])
            elif nd.op == "imp":
                y = nd.kids[1]
                s, w = ~w_v[x] | s_v[y], ~s_v[x] | w_v[y]
            else:
                a, b = wa[:, nd.win], wb[:, nd.win]
                y = nd.kids[1] if nd.op == "U" else x
                s = _windowed(nd.op, s_v[x], s_v[y], a, b, True, True)
                w = _windowed(nd.op, w_v[x], w_v[y], a, b, True, True)
        s_v.append(s)
        w_v.append(w)
    return s_v[-1][:, 0]


# -- per-shape threshold search -------------------------------------------------------

def _row_argmax(vals: np.ndarray):
    """First maximizer per row of a 2-D array."""
    k = np.argmax(vals, axis=1)
    return vals[np.arange(len(vals)), k], k


@dataclass
class _Interval:
    lin: list
    senses: list
    labels: np.ndarray
    domains: list
    values: list
    grid: int
    budget: int = 1 << 21  # array elements per evaluation batch

    def per_row(self) -> int:
        E, T = self.lin[0][0].shape
        return E * T

    def objective_terms(self, shape, wa, wb, thr) -> np.ndarray:
        lo, hi = interval_eval(shape, self.lin, self.senses, wa, wb, thr)
        return np.where(self.labels[None] > 0, lo, -hi)

    def objective(self, shape, wa, wb, thr) -> np.ndarray:
        return self.objective_terms(shape, wa, wb, thr).min(axis=1)

    def _eval_cands(self, shape, wa, wb, base, s, cands):
        """Objective for every row x candidate; ``cands`` is (K,) or (W, K)."""
        W = len(wa)
        cands = np.broadcast_to(cands, (W, cands.shape[-1]))
        K = cands.shape[1]
        out = np.empty((W, K))
        step = max(1, self.budget // (self.per_row() * max(1, shape.size) * K))
        for w0 in range(0, W, step):
            sl = slice(w0, w0 + step)
            n = len(wa[sl])
            thr = np.repeat(base[sl], K, axis=0)
            thr[:, s] = cands[sl].ravel()
            out[sl] = self.objective(shape, np.repeat(wa[sl], K, axis=0), np.repeat(wb[sl], K, axis=0), thr).reshape(n, K)
        return out, cands

    def candidates(self, fam: int, pairs: bool) -> np.ndarray:
        lo, hi = self.domains[fam]
        v = self.values[fam]
        if pairs:
            mids = ((v[:, None] + v[None, :]) / 2)[np.triu_indices(len(v))]
        else:
            mids = np.concatenate([v, (v[1:] + v[:-1]) / 2])
        extra = np.linspace(lo, hi, self.grid) if self.grid else np.empty(0)
        return np.unique(np.clip(np.concatenate([[lo, hi], mids, extra]), lo, hi))

    def _monotone(self, shape, wa, wb, base, fam):
        """Single slot with one polarity: every finite term is ``t_e(0) + slope_e c``."""
        lo, hi = self.domains[fam]
        W = len(wa)
        thr = base.copy()
        thr[:, 0] = 0.0
        t0 = self.objective_terms(shape, wa, wb, thr)
        d = -1.0 if self.senses[fam] == ">" else 1.0
        slope = d * next(iter(shape.parity[0])) * self.labels.astype(float)
        fin = np.isfinite(t0)
        dec, inc = fin & (slope < 0)[None], fin & (slope > 0)[None]
        min_dec = np.where(dec, t0, INF).min(axis=1)
        min_inc = np.where(inc, t0, INF).min(axis=1)
        has_d, has_i = dec.any(axis=1), inc.any(axis=1)
        with np.errstate(invalid="ignore"):
            c = np.where(has_d & has_i, (min_dec - min_inc) / 2, np.where(has_i, hi, lo))
        cands = np.stack([np.clip(c, lo, hi), np.full(W, lo), np.full(W, hi)], axis=1)
        vals = (t0[:, None, :] + slope[None, None, :] * cands[:, :, None]).min(axis=2)
        best, k = _row_argmax(vals)
        return best, cands[np.arange(W), k]

    def _lipschitz(self, shape, wa, wb, base, fam, coarse: int = 64):
        """Single slot with mixed polarity, solved exactly.

        The objective is either constant or 1-Lipschitz in the threshold, with
        its maximum at a midpoint of two data values (or a domain end). A
        coarse pass bounds every gap between probes; only gaps whose bound
        beats the best probe are searched point by point.
        """
        M = self.candidates(fam, pairs=True)
        W = len(wa)
        G = np.unique(np.linspace(0, len(M) - 1, min(coarse, len(M))).round().astype(int))
        fg, _ = self._eval_cands(shape, wa, wb, base, 0, M[G])
        best, k = _row_argmax(fg)
        best_c = M[G][k]
        with np.errstate(invalid="ignore"):
            bound = (fg[:, :-1] + fg[:, 1:] + (M[G[1:]] - M[G[:-1]])[None]) / 2
        live_w, live_g = np.nonzero(bound > best[:, None] + 1e-12)
        if len(live_w):
            rows, pts = [], []
            for w, gi in zip(live_w, live_g):
                inner = np.arange(G[gi] + 1, G[gi + 1])
                rows.append(np.full(len(inner), w))
                pts.append(inner)
            rows = np.concatenate(rows)
            pts = np.concatenate(pts)
            step = max(1, self.budget // (self.per_row() * max(1, shape.size)))
            for r0 in range(0, len(rows), step):
                r, q = rows[r0:r0 + step], pts[r0:r0 + step]
                thr = base[r].copy()
                thr[:, 0] = M[q]
                v = self.objective(shape, wa[r], wb[r], thr)
                for w, val, c in zip(r, v, M[q]):
                    if val > best[w] or (val == best[w] and c < best_c[w]):
                        best[w], best_c[w] = val, c
        return best, best_c

    def solve_slot(self, shape, wa, wb, base, s):
        """Best value and threshold of slot ``s`` per row, others fixed."""
        fam = shape.slot_family(s)
        if len(shape.slots) == 1:
            if len(shape.parity[0]) == 1:
                return self._monotone(shape, wa, wb, base, fam)
            return self._lipschitz(shape, wa, wb, base, fam)
        if len(shape.parity[s]) == 1:
            return self._bisect(shape, wa, wb, base, s, fam)
        vals, cands = self._eval_cands(shape, wa, wb, base, s, self.candidates(fam, pairs=False))
        best, k = _row_argmax(vals)
        return best, cands[np.arange(len(cands)), k]

    def _bisect(self, shape, wa, wb, base, s, fam, sections: int = 3):
        """One-polarity slot among several: terms are monotone in its threshold.

        The objective is ``min(D(c), I(c))`` with ``D`` non-increasing and ``I``
        non-decreasing, so its maximum sits where ``D - I`` changes sign.
        """
        lo, hi = self.domains[fam]
        d = -1.0 if self.senses[fam] == ">" else 1.0
        dec = d * next(iter(shape.parity[s])) * self.labels < 0
        W = len(wa)

        def parts(c, rows=None):
            rows = np.arange(W) if rows is None else rows
            thr = base[rows].copy()
            thr[:, s] = c
            t = self.objective_terms(shape, wa[rows], wb[rows], thr)
            return np.where(dec[None], t, INF).min(axis=1), np.where(dec[None], INF, t).min(axis=1)

        a, b = np.full(W, float(lo)), np.full(W, float(hi))
        tol = 1e-10 * max(1.0, abs(lo), abs(hi))
        frac = np.arange(1, sections) / sections
        while np.any(b - a > tol):
            # probe interior points; the crossing lies after the last probe with D > I
            pts = a[:, None] + (b - a)[:, None] * frac[None]
            D, I = parts(pts.ravel(), np.repeat(np.arange(W), len(frac)))
            right = (D > I).reshape(W, -1)
            last = np.where(right.any(axis=1), len(frac) - 1 - np.argmax(right[:, ::-1], axis=1), -1)
            na = np.where(last >= 0, pts[np.arange(W), np.maximum(last, 0)], a)
            nb = np.where(last + 1 < len(frac), pts[np.arange(W), np.minimum(last + 1, len(frac) - 1)], b)
            a, b = na, nb
        cands = np.stack([a, b], axis=1)
        vals = np.stack([np.minimum(*parts(a)), np.minimum(*parts(b))], axis=1)
        best, k = _row_argmax(vals)
        return best, cands[np.arange(W), k]

    def evaluate(self, shape, wa, wb, thr):
        return self.objective(shape, wa, wb, thr)


@dataclass
class _Point:
    lin: list  # per family (E, T)
    sorted_lin: list
    senses: list
    labels: np.ndarray
    domains: list
    budget: int = 1 << 22

    def correct(self, shape, wa, wb, thr) -> np.ndarray:
        """Number of correctly classified samples per row."""
        W = len(wa)
        E = len(self.labels)
        out = np.empty(W)
        step = max(1, self.budget // (E * (self.lin[0].shape[1] + 1) * 2))
        for w0 in range(0, W, step):
            sl = slice(w0, w0 + step)
            n = len(wa[sl])
            rows = {q: np.tile(self.lin[q], (n, 1)) for q in self._fams(shape)}
            sat = point_eval(
                shape, rows, self.senses, np.repeat(wa[sl], E, axis=0), np.repeat(wb[sl], E, axis=0),
                np.repeat(thr[sl], E, axis=0),
            ).reshape(n, E)
            out[sl] = np.where(self.labels[None] > 0, sat, ~sat).sum(axis=1)
        return out

    @staticmethod
    def _fams(shape):
        return sorted({nd.fam for nd in shape.nodes if nd.op == "p"}) or [0]

    def solve_slot(self, shape, wa, wb, base, s):
        fam = shape.slot_family(s)
        lo, hi = self.domains[fam]
        u = self.sorted_lin[fam]  # (E, T)
        E, T = u.shape
        gt = self.senses[fam] == ">"
        # a representative threshold for each piece of each sample's partition
        edge = np.full((E, 1), lo if gt else hi)
        reps = np.concatenate([edge, u], axis=1) if gt else np.concatenate([u, edge], axis=1)
        pos = u.ravel()
        order = np.argsort(pos, kind="stable")
        pos = pos[order]
        if gt:
            # count(c) = base + sum of deltas at u <= c
            cands = np.concatenate([[lo], pos[(pos > lo) & (pos <= hi)]])
            idx = np.searchsorted(pos, cands, side="right") - 1
        else:
            # count(c) = base + sum of deltas at u < c
            cands = np.concatenate([pos[(pos >= lo) & (pos < hi)], [hi]])
            idx = np.searchsorted(pos, cands, side="left") - 1
        W = len(wa)
        P = T + 1
        per_w = E * P
        step = max(1, self.budget // (per_w * P * 2))
        fams = self._fams(shape)
        best = np.empty(W)
        best_c = np.empty(W)
        for w0 in range(0, W, step):
            sl = slice(w0, w0 + step)
            n = len(wa[sl])
            thr = np.repeat(base[sl], per_w, axis=0)
            thr[:, s] = np.tile(reps.ravel(), n)
            rows = {q: np.tile(np.repeat(self.lin[q], P, axis=0), (n, 1)) for q in fams}
            sat = point_eval(
                shape, rows, self.senses, np.repeat(wa[sl], per_w, axis=0), np.repeat(wb[sl], per_w, axis=0), thr
            ).reshape(n, E, P)
            ok = np.where(self.labels[None, :, None] > 0, sat, ~sat).astype(np.int64)
            start = ok[:, :, 0].sum(axis=1)
            delta = (ok[:, :, 1:] - ok[:, :, :-1]).reshape(n, E * T)[:, order]
            cum = np.cumsum(delta, axis=1)
            counts = start[:, None] + np.where(idx >= 0, cum[:, np.maximum(idx, 0)], 0)
            v, k = _row_argmax(counts)
            best[sl] = v
            best_c[sl] = cands[k]
        return best, best_c

    def evaluate(self, shape, wa, wb, thr):
        return self.correct(shape, wa, wb, thr)


def _solve_shape(problem, shape: Shape, wa, wb, rounds: int = 3):
    """Best value and thresholds per window assignment (rows of ``wa``/``wb``)."""
    W = len(wa)
    S = len(shape.slots)
    thr = np.array([[sum(problem.domains[shape.slot_family(s)]) / 2 for s in range(S)]] * W).reshape(W, S)
    if S == 0:
        return problem.evaluate(shape, wa, wb, thr), thr
    val = np.full(W, -INF)
    for _ in range(rounds if S > 1 else 1):
        changed = False
        for s in range(S):
            v, c = problem.solve_slot(shape, wa, wb, thr, s)
            better = v > val
            if better.any():
                changed = True
                val = np.where(better, v, val)
                thr[better, s] = c[better]
        if not changed:
            break
    return val, thr


@dataclass
class InternalEnumerativeBackend:
    """Exhaustive search over DAG shapes and windows with per-slot threshold solving.

    ``structure_cap`` bounds the number of concrete skeletons (shape x window
    assignment) examined per solve; a capped search returns its best model
    flagged as not proven optimal. ``threshold_grid`` adds that many
    uniformly spaced candidates per slot in the candidate-based searches.
    """

    structure_cap: int | None = 2_000_000
    threshold_grid: int = 0
    window_chunk: int = 4096

    name = "internal"

    def _search(self, enc: Encoding, problem, timeout: float | None, target: float | None = None):
        start = time.monotonic()
        windows = all_windows(enc.horizon)
        nf = len(enc.grammar.families)
        best_v, best = -INF, None
        seen = 0
        capped = False
        for shape in shapes_up_to(enc.n, nf):
            combos = itertools.product(range(len(windows)), repeat=shape.nwin)
            while True:
                chunk = list(itertools.islice(combos, self.window_chunk))
                if not chunk:
                    break
                if self.structure_cap is not None and seen + len(chunk) > self.structure_cap:
                    chunk = chunk[: self.structure_cap - seen]
                    capped = True
                seen += len(chunk)
                idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), shape.nwin)
                wa, wb = windows[idx, 0], windows[idx, 1]
                if len(chunk):
                    vals, thr = _solve_shape(problem, shape, wa, wb)
                    k = int(np.argmax(vals))
                    if best is None or vals[k] > best_v:
                        best_v = float(vals[k])
                        best = (shape, list(zip(wa[k], wb[k])), thr[k].copy())
                if target is not None and best_v >= target:
                    return self._model(enc, problem, best, optimal=True)
                if timeout is not None and time.monotonic() - start > timeout:
                    raise SolverTimeout(f"internal search exceeded {timeout} s", self._model(enc, problem, best, False))
                if capped:
                    return self._model(enc, problem, best, optimal=False)
        return self._model(enc, problem, best, optimal=True)

    def _model(self, enc: Encoding, problem, best, optimal: bool) -> SolverModel | None:
        if best is None:
            return None
        shape, wins, thr = best
        phi = shape.to_formula(enc.grammar, wins, thr)
        m = SolverModel(enc.n, encode_assignment(phi, enc.n, enc.grammar, enc.domains), optimal=optimal, formula=phi)
        wa = np.array([[a for a, _ in wins]], dtype=np.int64).reshape(1, shape.nwin)
        wb = np.array([[b for _, b in wins]], dtype=np.int64).reshape(1, shape.nwin)
        if isinstance(problem, _Interval):
            lo, hi = interval_eval(shape, problem.lin, problem.senses, wa, wb, thr[None])
            m.root_values = [(float(a), float(b)) for a, b in zip(lo[0], hi[0])]
            m.objective = min(a if lab > 0 else -b for (a, b), lab in zip(m.root_values, problem.labels))
        else:
            E = len(problem.labels)
            sat = point_eval(shape, problem.lin, problem.senses, np.repeat(wa, E, 0), np.repeat(wb, E, 0), np.repeat(thr[None], E, 0))
            m.root_values = [bool(x) for x in sat]
            m.objective = float(np.where(problem.labels > 0, sat, ~sat).sum())
        return m

    def interval_problem(self, enc: Encoding) -> _Interval:
        data, g = enc.data, enc.grammar
        lin = [linear_range(f.coefficients, data.lower, data.upper) for f in g.families]
        values = [np.unique(np.concatenate([a.ravel(), b.ravel()])) for a, b in lin]
        return _Interval(lin, [f.sense for f in g.families], data.labels, enc.domains, values, self.threshold_grid)

    def point_problem(self, enc: Encoding) -> _Point:
        data, g = enc.data, enc.grammar
        lin = [linear_range(f.coefficients, data.values, data.values)[0] for f in g.families]
        return _Point(lin, [np.sort(x, axis=1) for x in lin], [f.sense for f in g.families], data.labels, enc.domains)

    def optimize(self, enc: Encoding, timeout: float | None = None) -> SolverModel:
        if enc.mode != "interval":
            raise ValueError("optimize expects an interval encoding")
        return self._search(enc, self.interval_problem(enc), timeout)

    def max_weighted(self, enc: Encoding, timeout: float | None = None) -> SolverModel:
        if enc.mode != "point":
            raise ValueError("max_weighted expects a point encoding")
        # all goals satisfied is a proven optimum, so the search may stop there
        return self._search(enc, self.point_problem(enc), timeout, target=float(enc.entries))

    def satisfy(self, enc: Encoding, timeout: float | None = None) -> SolverModel | None:
        m = self.max_weighted(enc, timeout)
        return m if m.objective == enc.entries else None
