"""Size-increasing formula search: the uncertainty-aware loop and its sampling baseline."""
from __future__ import annotations

import itertools
import logging
import math
import time

from ..encoder.encoding import encode_interval, encode_point
from ..encoder.external import SolverTimeout
from ..encoder.internal import InternalEnumerativeBackend
from ..encoder.model import SolverModel, decode_model
from ..grammar import threshold_domains
from ..model import Label, LabeledDataset, PointDataset
from ..objective import objective_dataset
from ..semantics import eval_strong
from .params import InferenceParams, InferenceResult, StopReason

log = logging.getLogger(__name__)


def _sizes(params: InferenceParams, skip_to_cap: bool):
    N = params.max_size
    if skip_to_cap:
        if N == math.inf:
            raise ValueError("an infinite stopping threshold needs a finite max size")
        return [N]
    return itertools.count(1) if N == math.inf else range(1, N + 1)


def _label_warnings(data) -> list[str]:
    if data.count(Label.POS) == 0 or data.count(Label.NEG) == 0:
        return ["dataset has a single label; the result only describes that class"]
    return []


def _formula(m: SolverModel, grammar):
    return m.formula if m.formula is not None else decode_model(m, grammar)


def classification_rate(data: PointDataset, phi) -> float:
    """Fraction of samples classified correctly (strong satisfaction at t0)."""
    ok = sum(eval_strong(t, phi, 0) == (lab == Label.POS) for t, lab in data)
    return ok / len(data)


def tli_ua(data: LabeledDataset, params: InferenceParams | None = None, backend=None) -> InferenceResult:
    """Grow the formula size until the worst-case margin reaches ``R`` or ``n`` passes ``N``.

    Each iteration maximizes the dataset objective over formulas of size
    ``n``, decodes the optimum and re-evaluates it with the semantics module.
    With ``R = inf`` only size ``N`` is solved.
    """
    params = params or InferenceParams()
    if not data:
        raise ValueError("cannot infer from an empty dataset")
    backend = backend or InternalEnumerativeBackend()
    grammar = params.grammar_for(data.dims)
    domains = threshold_domains(grammar, data)
    R = params.min_robustness
    res = None
    start = time.monotonic()
    for n in _sizes(params, R == math.inf):
        enc = encode_interval(data, n, grammar, domains)
        try:
            m = backend.optimize(enc, params.timeout)
            stop = None
        except SolverTimeout as exc:
            if exc.partial is None:
                if res is None:
                    raise
                res.stop = StopReason.TIMEOUT
                break
            m, stop = exc.partial, StopReason.TIMEOUT
        phi = _formula(m, grammar)
        r = objective_dataset(data, phi)
        log.debug("n=%d F=%g %s", n, r, phi)
        prev = res
        res = InferenceResult(phi, r, n, stop or StopReason.SIZE_CAP, warnings=_label_warnings(data))
        if prev is not None:
            res.models, res.history = prev.models, prev.history
        res.models.append(m)
        res.history.append((n, r))
        if stop is not None:
            break
        if r >= R:
            res.stop = StopReason.MARGIN
            break
    res.seconds = time.monotonic() - start
    return res


def tli_rs(data: PointDataset, params: InferenceParams | None = None, backend=None) -> InferenceResult:
    """Sampling baseline: maximize correctly classified samples per size until ``s >= S``.

    With ``S = 1`` sizes below ``N`` are posed as plain satisfiability
    problems; size ``N`` uses the weighted problem so that a best partial
    classifier is returned when no perfect one exists.
    """
    params = params or InferenceParams()
    if not data:
        raise ValueError("cannot infer from an empty dataset")
    backend = backend or InternalEnumerativeBackend()
    grammar = params.grammar_for(data.dims)
    domains = threshold_domains(grammar, data)
    S = params.min_classification
    N = params.max_size
    res = None
    start = time.monotonic()
    for n in _sizes(params, False):
        try:
            if S == 1.0 and n < N:
                m = backend.satisfy(encode_point(data, n, grammar, domains, soft=False), params.timeout)
                if m is None:
                    continue
            else:
                # at the last size a perfect weighted optimum is also the satisfying model
                m = backend.max_weighted(encode_point(data, n, grammar, domains), params.timeout)
            stop = None
        except SolverTimeout as exc:
            if exc.partial is None:
                if res is None:
                    raise
                res.stop = StopReason.TIMEOUT
                break
            m, stop = exc.partial, StopReason.TIMEOUT
        phi = _formula(m, grammar)
        s = classification_rate(data, phi)
        prev = res
        res = InferenceResult(phi, s, n, stop or StopReason.SIZE_CAP, warnings=_label_warnings(data))
        if prev is not None:
            res.models, res.history = prev.models, prev.history
        res.models.append(m)
        res.history.append((n, s))
        if stop is not None:
            break
        if s >= S:
            res.stop = StopReason.MARGIN
            break
    if res is None:
        raise RuntimeError("no size was solved")  # unreachable: the last size always yields a model
    res.seconds = time.monotonic() - start
    return res
