"""Linear exact repair of a single node: bandwidth and I/O analysis.

A repair scheme for node i is an ell x (r*ell) matrix M with M H_i
invertible.  Writing W = ker M (dimension (r-1)*ell), the download from
helper j costs rank(M H_j) = ell - dim(W meet H_j) symbols and touches
the columns of H_j that W misses.  Optimizing a scheme is therefore a
search over W; this module does that search exhaustively and keeps exact
witnesses.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._kernel import rre_rank
from .code import ArrayCode, code_from_intrinsic, is_mds
from .gf import FieldCtx
from .linalg import (
    BudgetExceededError,
    DEFAULT_ENUM_BUDGET,
    MatrixGF,
    Subspace,
    all_subspaces,
    enumerate_subspaces,
    gaussian_binomial,
    intersect_dim,
    kernel,
    projective_point_count,
    projective_points,
    rank,
)

log = logging.getLogger(__name__)

_CAND_CACHE_LIMIT = 500_000


class SamplingExhaustedError(RuntimeError):
    """random_mds_code hit its retry cap without producing a code."""


def counting_bound(n: int, r: int, ell: int, q: int) -> int:
    """Lower bound ell*(n-1) - (q^((r-1)*ell) - 1)/(q - 1) on repair bandwidth.

    A repair subspace W has (q^((r-1)*ell) - 1)/(q - 1) projective points
    and each unit of saved download consumes at least one of them, which
    caps the total saving.  The bound may be negative for small n.
    """
    if n < 2:
        raise ValueError("need n >= 2 for repair to have helpers")
    if r < 1 or ell < 1 or q < 2:
        raise ValueError("need r >= 1, ell >= 1, q >= 2")
    return ell * (n - 1) - projective_point_count((r - 1) * ell, q)


@dataclass(frozen=True)
class RepairWitness:
    """A concrete repair scheme for one node, with its full helper profile."""

    node: int
    space: Subspace
    matrix: MatrixGF
    helper_dims: tuple[tuple[int, int], ...]  # (j, dim(W meet H_j))
    helper_points: tuple[tuple[int, int], ...]  # (j, |X_j meet P(W)|)
    bw: int
    io: int


@dataclass(frozen=True)
class NodeRepair:
    node: int
    alpha: int
    lam: int
    beta: int
    gamma: int
    alpha_witness: RepairWitness
    lambda_witness: RepairWitness
    attains_bw_bound: bool
    attains_io_bound: bool


@dataclass(frozen=True)
class RepairReport:
    n: int
    k: int
    ell: int
    q: int
    bound: int
    point_capacity: int  # projective points of a candidate repair subspace
    nodes: tuple[NodeRepair, ...]
    beta_avg: Fraction
    beta_max: int
    gamma_avg: Fraction
    gamma_max: int
    exhaustive: bool
    candidates_total: int
    candidates_scanned: int
    anomalies: tuple[str, ...]

    @property
    def code_attains_bw(self) -> bool | None:
        if not self.exhaustive:
            return None
        return all(nd.attains_bw_bound for nd in self.nodes)

    @property
    def code_attains_io(self) -> bool | None:
        if not self.exhaustive:
            return None
        return all(nd.attains_io_bound for nd in self.nodes)


def repair_matrix_from_subspace(w: Subspace, hi: Subspace) -> MatrixGF:
    """The canonical matrix M with ker M = w: a reduced basis of the annihilator.

    hi is the failed node's subspace; w must be a complement of it, which
    is exactly the condition making M H_i invertible.
    """
    if w.field != hi.field or w.ambient_dim != hi.ambient_dim:
        raise ValueError("repair subspace and node subspace live in different spaces")
    if w.dim + hi.dim != w.ambient_dim:
        raise ValueError("repair subspace must have dimension (r-1)*ell")
    if intersect_dim(w, hi) != 0:
        raise ValueError("repair subspace meets the failed node's subspace")
    if w.dim == 0:
        return MatrixGF.identity(w.field, w.ambient_dim)
    return kernel(w.basis_matrix).basis_matrix


def _point_reps(space: Subspace) -> frozenset[tuple[int, ...]]:
    return frozenset(p.representative for p in projective_points(space))


_point_rep_cache: dict[Subspace, frozenset[tuple[int, ...]]] = {}


def _cached_point_reps(space: Subspace) -> frozenset[tuple[int, ...]]:
    reps = _point_rep_cache.get(space)
    if reps is None:
        if len(_point_rep_cache) > 1 << 20:
            _point_rep_cache.clear()
        reps = _point_reps(space)
        _point_rep_cache[space] = reps
    return reps


def _profile(code: ArrayCode, w: Subspace) -> tuple[list[int], list[int]]:
    """Per node intersection dimensions and captured column point counts."""
    f = code.field
    q = f.q
    sub_t, mul_t, inv_t = f.sub_tab, f.mul_tab, f.inv_tab
    d = code.ambient_dim
    wp = w.packed
    wd = w.dim
    dims = []
    for h in code.node_subspaces:
        buf = bytearray(wp)
        buf += h.packed
        r = rre_rank(buf, wd + h.dim, d, q, sub_t, mul_t, inv_t)
        dims.append(wd + h.dim - r)
    wreps = _cached_point_reps(w)
    zs = [
        sum(p.representative in wreps for p in plist) for plist in code.column_points
    ]
    return dims, zs


def make_witness(code: ArrayCode, node: int, w: Subspace) -> RepairWitness:
    """Wrap the repair subspace w as a witness for the given node."""
    if w.ambient_dim != code.ambient_dim or w.field != code.field:
        raise ValueError("repair subspace does not match the code")
    if w.dim != (code.r - 1) * code.ell:
        raise ValueError("repair subspace must have dimension (r-1)*ell")
    dims, zs = _profile(code, w)
    if dims[node] != 0:
        raise ValueError("repair subspace meets the failed node's subspace")
    helpers = [j for j in range(code.n) if j != node]
    bw = sum(code.ell - dims[j] for j in helpers)
    io = sum(code.ell - zs[j] for j in helpers)
    return RepairWitness(
        node=node,
        space=w,
        matrix=repair_matrix_from_subspace(w, code.node_subspaces[node]),
        helper_dims=tuple((j, dims[j]) for j in helpers),
        helper_points=tuple((j, zs[j]) for j in helpers),
        bw=bw,
        io=io,
    )


def bw_of_scheme(code: ArrayCode, node: int, m: MatrixGF) -> int:
    """Download cost sum_j rank(M H_j), cross-checked against ker M."""
    if m.rows != code.ell or m.cols != code.ambient_dim:
        raise ValueError("repair matrix must be ell x r*ell")
    if rank(m.mul(code.blocks[node])) != code.ell:
        raise ValueError("M H_i must be invertible for the failed node")
    w = kernel(m)
    total = 0
    for j in range(code.n):
        if j == node:
            continue
        via_rank = rank(m.mul(code.blocks[j]))
        via_space = code.ell - intersect_dim(w, code.node_subspaces[j])
        if via_rank != via_space:
            raise AssertionError("matrix and subspace bandwidth forms disagree")
        total += via_rank
    return total


def io_of_scheme(code: ArrayCode, node: int, m: MatrixGF) -> int:
    """Access cost: nonzero columns of M H_j, cross-checked against ker M."""
    if m.rows != code.ell or m.cols != code.ambient_dim:
        raise ValueError("repair matrix must be ell x r*ell")
    if rank(m.mul(code.blocks[node])) != code.ell:
        raise ValueError("M H_i must be invertible for the failed node")
    w = kernel(m)
    wreps = _cached_point_reps(w)
    total = 0
    for j in range(code.n):
        if j == node:
            continue
        prod = m.mul(code.blocks[j])
        nonzero = sum(1 for t in range(prod.cols) if any(prod.col(t)))
        captured = sum(
            p.representative in wreps for p in code.column_points[j]
        )
        if nonzero != code.ell - captured:
            raise AssertionError("matrix and subspace access forms disagree")
        total += nonzero
    return total


def _candidate_spaces(code: ArrayCode, budget: int) -> tuple[Iterable[Subspace], int]:
    wdim = (code.r - 1) * code.ell
    total = gaussian_binomial(code.ambient_dim, wdim, code.field.q)
    if total <= min(budget, _CAND_CACHE_LIMIT):
        return all_subspaces(code.field, code.ambient_dim, wdim), total
    return (
        enumerate_subspaces(code.field, code.ambient_dim, wdim, budget=None),
        total,
    )


def _scan(
    code: ArrayCode,
    nodes: Sequence[int],
    budget: int,
) -> tuple[dict[int, tuple[int, Subspace]], dict[int, tuple[int, Subspace]], int, int, list[str]]:
    """Stream candidate repair subspaces, track per node maxima of both objectives.

    Keeps the first maximizer in enumeration order for each node and
    objective.  Scans min(budget, total) candidates.
    """
    cands, total = _candidate_spaces(code, budget)
    best_dim: dict[int, tuple[int, Subspace]] = {}
    best_pts: dict[int, tuple[int, Subspace]] = {}
    anomalies: list[str] = []
    scanned = 0
    for w in cands:
        if scanned == budget:
            break
        scanned += 1
        dims, zs = _profile(code, w)
        for j in range(code.n):
            if zs[j] > dims[j]:
                msg = (
                    f"captured points exceed intersection dimension at node {j}: "
                    f"z={zs[j]} dim={dims[j]} W={w.entries}"
                )
                log.warning(msg)
                anomalies.append(msg)
        dim_total = sum(dims)
        pts_total = sum(zs)
        for i in nodes:
            if dims[i]:
                continue
            a = dim_total - dims[i]
            l = pts_total - zs[i]
            cur = best_dim.get(i)
            if cur is None or a > cur[0]:
                best_dim[i] = (a, w)
            cur = best_pts.get(i)
            if cur is None or l > cur[0]:
                best_pts[i] = (l, w)
    return best_dim, best_pts, total, scanned, anomalies


def _check_node_invariants(
    code: ArrayCode, node: int, alpha: int, witness: RepairWitness, capacity: int
) -> None:
    if alpha > capacity:
        raise AssertionError(
            f"node {node}: saving {alpha} exceeds the projective point capacity {capacity}"
        )
    if alpha == capacity:
        if any(d > 1 for _, d in witness.helper_dims):
            raise AssertionError(
                f"node {node}: bound attained but a helper intersection exceeds dim 1"
            )
        if code.n < 1 + capacity:
            raise AssertionError(
                f"node {node}: bound attained with n={code.n} < {1 + capacity} helpers+1"
            )


def optimal_alpha(
    code: ArrayCode, node: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[int, RepairWitness]:
    """Exhaustive maximum of the total helper intersection dimension.

    Returns the maximum together with the first witness in enumeration
    order.  Raises BudgetExceededError when the candidate count exceeds
    the budget.
    """
    _require_repairable(code, node)
    cap = projective_point_count((code.r - 1) * code.ell, code.field.q)
    total = gaussian_binomial(code.ambient_dim, (code.r - 1) * code.ell, code.field.q)
    if total > budget:
        raise BudgetExceededError(f"{total} candidates exceed the budget of {budget}")
    best_dim, _, _, _, _ = _scan(code, [node], budget)
    if node not in best_dim:
        raise AssertionError("no feasible repair subspace exists for an MDS code node")
    alpha, w = best_dim[node]
    witness = make_witness(code, node, w)
    _check_node_invariants(code, node, alpha, witness, cap)
    return alpha, witness


def optimal_lambda(
    code: ArrayCode, node: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[int, RepairWitness]:
    """Exhaustive maximum of the total captured column point count."""
    _require_repairable(code, node)
    total = gaussian_binomial(code.ambient_dim, (code.r - 1) * code.ell, code.field.q)
    if total > budget:
        raise BudgetExceededError(f"{total} candidates exceed the budget of {budget}")
    _, best_pts, _, _, _ = _scan(code, [node], budget)
    if node not in best_pts:
        raise AssertionError("no feasible repair subspace exists for an MDS code node")
    lam, w = best_pts[node]
    return lam, make_witness(code, node, w)


def _require_repairable(code: ArrayCode, node: int | None = None) -> None:
    if code.n < 2:
        raise ValueError("repair needs at least one helper, so n >= 2")
    if node is not None and not 0 <= node < code.n:
        raise ValueError(f"node {node} out of range")


def repair_report(code: ArrayCode, *, budget: int = DEFAULT_ENUM_BUDGET) -> RepairReport:
    """Per node optimal bandwidth and I/O by a single shared candidate scan.

    When the candidate count exceeds the budget only a prefix is scanned:
    alpha and lambda become lower bounds, beta and gamma upper bounds, and
    the attainment flags are dropped from the aggregate properties.
    """
    _require_repairable(code)
    q = code.field.q
    wdim = (code.r - 1) * code.ell
    cap = projective_point_count(wdim, q)
    bound = counting_bound(code.n, code.r, code.ell, q)
    nodes = list(range(code.n))
    best_dim, best_pts, total, scanned, anomalies = _scan(code, nodes, budget)
    exhaustive = scanned == total
    summaries = []
    for i in nodes:
        if i not in best_dim:
            raise AssertionError(
                "no feasible repair subspace found"
                + ("" if exhaustive else " within the budget")
            )
        alpha, wa = best_dim[i]
        lam, wl = best_pts[i]
        if lam > alpha:
            raise AssertionError(
                f"node {i}: captured points {lam} exceed intersection total {alpha}"
            )
        wit_a = make_witness(code, i, wa)
        wit_l = make_witness(code, i, wl)
        beta = code.ell * (code.n - 1) - alpha
        gamma = code.ell * (code.n - 1) - lam
        if exhaustive:
            _check_node_invariants(code, i, alpha, wit_a, cap)
            if beta < bound:
                raise AssertionError(f"node {i}: bandwidth {beta} undercuts the bound {bound}")
            if code.r >= 3 and code.ell >= 2 and beta == bound:
                raise AssertionError(
                    f"node {i}: bandwidth meets the bound, impossible for r >= 3, ell >= 2"
                )
        summaries.append(
            NodeRepair(
                node=i,
                alpha=alpha,
                lam=lam,
                beta=beta,
                gamma=gamma,
                alpha_witness=wit_a,
                lambda_witness=wit_l,
                attains_bw_bound=(beta == bound),
                attains_io_bound=(gamma == bound),
            )
        )
    betas = [s.beta for s in summaries]
    gammas = [s.gamma for s in summaries]
    return RepairReport(
        n=code.n,
        k=code.k,
        ell=code.ell,
        q=q,
        bound=bound,
        point_capacity=cap,
        nodes=tuple(summaries),
        beta_avg=Fraction(sum(betas), len(betas)),
        beta_max=max(betas),
        gamma_avg=Fraction(sum(gammas), len(gammas)),
        gamma_max=max(gammas),
        exhaustive=exhaustive,
        candidates_total=total,
        candidates_scanned=scanned,
        anomalies=tuple(anomalies),
    )


def random_mds_code(
    field: FieldCtx,
    r: int,
    ell: int,
    n: int,
    rng: random.Random,
    *,
    retry_cap: int = 10_000,
) -> ArrayCode:
    """Sample an (n, n-r, ell) MDS array code over the given field.

    Walks the candidate subspaces in a random order, keeping each one that
    stays r-wise independent with the family so far; whole-family rejection
    sampling would almost never terminate at the rarer parameters.  The
    finished family is still verified by the full MDS check.
    """
    if r < 2:
        raise ValueError("need r >= 2")
    if n < r:
        raise ValueError("need n >= r")
    pool = all_subspaces(field, r * ell, ell)
    f = field
    sub_t, mul_t, inv_t = f.sub_tab, f.mul_tab, f.inv_tab
    d = r * ell

    def compatible(family: list[Subspace], cand: Subspace) -> bool:
        from itertools import combinations

        for group in combinations(family, r - 1):
            buf = bytearray(cand.packed)
            for g in group:
                buf += g.packed
            if rre_rank(buf, r * ell, d, f.q, sub_t, mul_t, inv_t) != d:
                return False
        return True

    for _ in range(retry_cap):
        order = list(range(len(pool)))
        rng.shuffle(order)
        family: list[Subspace] = []
        for idx in order:
            cand = pool[idx]
            if len(family) < r - 1 or compatible(family, cand):
                family.append(cand)
                if len(family) == n:
                    break
        if len(family) < n:
            continue
        code = code_from_intrinsic(tuple(family))
        chk = is_mds(code)
        if chk.ok:
            return code
    raise SamplingExhaustedError(
        f"no MDS code found for q={field.q}, r={r}, ell={ell}, n={n} "
        f"after {retry_cap} attempts"
    )


@dataclass(frozen=True)
class SweepResult:
    q: int
    ell: int
    r: int
    trials_requested: int
    codes_tested: int
    sampling_failures: int
    nodes_checked: int
    min_slack: int | None
    equality_cases: tuple[tuple[int, int], ...]  # (n, node) pairs with beta == bound
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _bound_sweep(
    q: int,
    ell: int,
    r: int,
    *,
    trials: int,
    seed: int,
    strict: bool,
    n_values: Sequence[int] | None,
) -> SweepResult:
    from .code import length_bound
    from .gf import field_of_order

    field = field_of_order(q)
    if n_values is None:
        n_values = list(range(r + 1, length_bound(q, ell, r) + 1))
    if not n_values:
        raise ValueError("no admissible code lengths")
    rng = random.Random(seed)
    codes = 0
    failures = 0
    nodes_checked = 0
    min_slack: int | None = None
    equalities: list[tuple[int, int]] = []
    violations: list[str] = []
    for trial in range(trials):
        n = n_values[trial % len(n_values)]
        try:
            code = random_mds_code(field, r, ell, n, rng)
        except SamplingExhaustedError:
            failures += 1
            continue
        codes += 1
        report = repair_report(code)
        assert report.exhaustive
        for nd in report.nodes:
            nodes_checked += 1
            slack = nd.beta - report.bound
            if min_slack is None or slack < min_slack:
                min_slack = slack
            if nd.gamma < nd.beta:
                violations.append(
                    f"n={n} node={nd.node}: gamma {nd.gamma} < beta {nd.beta}"
                )
            if slack < 0:
                violations.append(
                    f"n={n} node={nd.node}: beta {nd.beta} below bound {report.bound}"
                )
            elif slack == 0:
                equalities.append((n, nd.node))
                if strict:
                    violations.append(
                        f"n={n} node={nd.node}: beta equals the bound, strictness fails"
                    )
    return SweepResult(
        q=q,
        ell=ell,
        r=r,
        trials_requested=trials,
        codes_tested=codes,
        sampling_failures=failures,
        nodes_checked=nodes_checked,
        min_slack=min_slack,
        equality_cases=tuple(equalities),
        violations=tuple(violations),
    )


def verify_bound_sweep(
    q: int,
    ell: int,
    r: int,
    *,
    trials: int,
    seed: int = 0,
    n_values: Sequence[int] | None = None,
) -> SweepResult:
    """Check beta_i >= bound and gamma_i >= beta_i on random MDS codes."""
    if r < 2 or ell < 1:
        raise ValueError("need r >= 2 and ell >= 1")
    return _bound_sweep(q, ell, r, trials=trials, seed=seed, strict=False, n_values=n_values)


def verify_strictness_sweep(
    q: int,
    ell: int,
    r: int,
    *,
    trials: int,
    seed: int = 0,
    n_values: Sequence[int] | None = None,
) -> SweepResult:
    """Check beta_i > bound strictly on random MDS codes, for r >= 3, ell >= 2."""
    if r < 3 or ell < 2:
        raise ValueError("strictness requires r >= 3 and ell >= 2")
    return _bound_sweep(q, ell, r, trials=trials, seed=seed, strict=True, n_values=n_values)
