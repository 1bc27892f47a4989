"""Named identity checks over matched trees, with pass/fail witnesses.

Every check recomputes both sides of one matrix/vector identity from scratch
and compares canonical forms; a failure carries the offending index and the
nonzero residual so it can be replayed standalone.  The enumerated suite is
fully symbolic; the random large-tree suite evaluates the product identities
at exact rational points instead (still exact, never floating point).
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from fractions import Fraction
from operator import mul

from . import exactla, qmatrices, treecore
from .exactla import KIND_L, KIND_R, Matrix, Vector
from .polyalg import ONE, Poly, Q, RatFun, ZERO
from .qmatrices import BdqZero
from .treecore import MatchedTree

_Q2 = Poly((0, 0, 1))
_ONE_MINUS_Q2 = Poly((1, 0, -1))
_ONE_PLUS_Q = Poly((1, 1))
_Q_ONE_PLUS_Q = Poly((0, 1, 1))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None
    skipped: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed, "witness": self.witness}
        if self.skipped:
            out["skipped"] = self.skipped
        return out


@dataclass(frozen=True)
class VerificationReport:
    tree_code: bytes
    p: int
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def first_failure(self) -> CheckResult | None:
        return next((r for r in self.results if not r.passed), None)

    def to_json(self) -> dict:
        return {
            "tree": self.tree_code.hex(),
            "p": self.p,
            "checks": [r.to_json() for r in self.results],
        }


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    scope: str
    description: str


CHECKS = (
    IdentityCheck("det_E", "single-tree",
                  "det of the exponential matrix is q^p (1-q^2)^(p-1)"),
    IdentityCheck("det_qL", "single-tree",
                  "det of the bipartite q-Laplacian is 1-q^2"),
    IdentityCheck("bdq", "single-tree",
                  "determinant route and recursive route agree on the distance index"),
    IdentityCheck("sum_mu", "per-vertex",
                  "entries of the signed degree vector sum to (diff+1)q^2 - diff"),
    IdentityCheck("row_col_sums", "single-tree",
                  "row/column sums of the q-Laplacian are (1-q^2) times the tau vectors"),
    IdentityCheck("B_tau", "single-tree",
                  "the distance matrix sends tau_r (and tau_l^t) to the index times ones"),
    IdentityCheck("lemma_111", "single-tree",
                  "-qL.qB + (1+q) tau_r ones^t = q(1+q) I"),
    IdentityCheck("inverse_E", "single-tree",
                  "closed-form inverse of the exponential matrix (and oracle equality)"),
    IdentityCheck("inverse_qB", "single-tree",
                  "closed-form inverse of the q-distance matrix (and oracle equality)"),
    IdentityCheck("attach_update", "attachment-pair",
                  "block update formulas for qL and tau_r under pair attachment"),
    IdentityCheck("block_decomposition", "attachment-pair",
                  "qL reassembles from the split subtrees at any branching L-vertex"),
    IdentityCheck("q1_properties", "single-tree",
                  "specialization at q=1: sums, adjugate, rank, symmetry, inverse"),
    IdentityCheck("full_dq_ed", "single-tree",
                  "full-matrix determinants of the vertex-indexed distance analogues"),
)

_names = [c.name for c in CHECKS]
assert len(_names) == len(set(_names))


# ---------------------------------------------------------------------------
# comparison helpers
# ---------------------------------------------------------------------------


def _entry_repr(e):
    if isinstance(e, (Poly, RatFun)):
        return e.to_json()
    return str(e)


def _first_mismatch(got: Matrix, want: Matrix):
    for i in range(got.rows):
        for j in range(got.cols):
            if not got[i, j] == want[i, j]:
                return i, j
    return None


def _compare_matrices(name: str, label: str, got: Matrix, want: Matrix) -> CheckResult:
    spot = _first_mismatch(got, want)
    if spot is None:
        return CheckResult(name, True)
    i, j = spot
    residual = got[i, j] - want[i, j]
    return CheckResult(name, False, {
        "identity": label,
        "entry": [i, j],
        "got": _entry_repr(got[i, j]),
        "want": _entry_repr(want[i, j]),
        "residual": _entry_repr(residual),
    })


def _compare_vectors(name: str, label: str, got: Vector, want: Vector) -> CheckResult:
    for i, (a, b) in enumerate(zip(got, want)):
        if not a == b:
            return CheckResult(name, False, {
                "identity": label,
                "entry": [i],
                "got": _entry_repr(a),
                "want": _entry_repr(b),
                "residual": _entry_repr(a - b),
            })
    return CheckResult(name, True)


def _scalar_result(name: str, label: str, got, want) -> CheckResult:
    if got == want:
        return CheckResult(name, True)
    return CheckResult(name, False, {
        "identity": label,
        "got": _entry_repr(got),
        "want": _entry_repr(want),
        "residual": _entry_repr(got - want),
    })


def _ones(p: int, kind: str) -> Vector:
    return Vector((ONE,) * p, kind)


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------


def check_det_E(mt: MatchedTree) -> CheckResult:
    p = mt.p
    det = exactla.det_bareiss(qmatrices.build_E(mt))
    want = Q**p * _ONE_MINUS_Q2 ** (p - 1)
    return _scalar_result("det_E", "det E = q^p (1-q^2)^(p-1)", det, want)


def check_det_qL(mt: MatchedTree) -> CheckResult:
    det = exactla.det_bareiss(qmatrices.build_qL(mt))
    return _scalar_result("det_qL", "det qL = 1-q^2", det, _ONE_MINUS_Q2)


def check_bdq(mt: MatchedTree) -> CheckResult:
    p = mt.p
    via_det = qmatrices.bdq_det(mt)
    via_rec = qmatrices.bdq_recursive(mt)
    if via_det != via_rec:
        return CheckResult("bdq", False, {
            "identity": "bd_q determinant route equals recursion",
            "got": _entry_repr(via_det),
            "want": _entry_repr(via_rec),
            "residual": _entry_repr(via_det - via_rec),
        })
    det = exactla.det_bareiss(qmatrices.build_qB(mt))
    sign = -1 if (p - 1) % 2 else 1
    want = sign * Q ** (p - 1) * _ONE_PLUS_Q ** (p - 1) * via_det
    return _scalar_result(
        "bdq", "det qB = (-1)^(p-1) q^(p-1) (1+q)^(p-1) bd_q", det, want
    )


def check_sum_mu(mt: MatchedTree) -> CheckResult:
    for v in range(mt.tree.n):
        mu = qmatrices.qsigned_degree_vector(mt, v)
        f = treecore.diff(mt, v)
        want = Poly((-f, 0, f + 1))
        got = mu.sum()
        if got != want:
            return CheckResult("sum_mu", False, {
                "identity": "ones^t mu_v = (diff+1)q^2 - diff",
                "vertex": v,
                "got": _entry_repr(got),
                "want": _entry_repr(want),
                "residual": _entry_repr(got - want),
            })
    return CheckResult("sum_mu", True)


def check_row_col_sums(mt: MatchedTree) -> CheckResult:
    qL = qmatrices.build_qL(mt)
    tau_l, tau_r = qmatrices.qtau(mt)
    col_sums = exactla.vec_mat(_ones(mt.p, KIND_R), qL)
    res = _compare_vectors(
        "row_col_sums", "ones^t qL = (1-q^2) tau_l^t",
        col_sums, tau_l.scale(_ONE_MINUS_Q2),
    )
    if not res.passed:
        return res
    row_sums = exactla.mat_vec(qL, _ones(mt.p, KIND_L))
    return _compare_vectors(
        "row_col_sums", "qL ones = (1-q^2) tau_r",
        row_sums, tau_r.scale(_ONE_MINUS_Q2),
    )


def check_B_tau(mt: MatchedTree) -> CheckResult:
    qB = qmatrices.build_qB(mt)
    tau_l, tau_r = qmatrices.qtau(mt)
    bd = qmatrices.bdq_det(mt)
    res = _compare_vectors(
        "B_tau", "qB tau_r = bd_q ones",
        exactla.mat_vec(qB, tau_r), _ones(mt.p, KIND_L).scale(bd),
    )
    if not res.passed:
        return res
    return _compare_vectors(
        "B_tau", "tau_l^t qB = bd_q ones^t",
        exactla.vec_mat(tau_l, qB), _ones(mt.p, KIND_R).scale(bd),
    )


def check_lemma_111(mt: MatchedTree) -> CheckResult:
    qL = qmatrices.build_qL(mt)
    qB = qmatrices.build_qB(mt)
    _, tau_r = qmatrices.qtau(mt)
    got = (-(qL @ qB)) + exactla.outer(tau_r, _ones(mt.p, KIND_R)).scale(_ONE_PLUS_Q)
    want = Matrix.identity(mt.p, KIND_R, KIND_R).scale(_Q_ONE_PLUS_Q)
    return _compare_matrices(
        "lemma_111", "-qL.qB + (1+q) tau_r ones^t = q(1+q) I", got, want
    )


def _rf_identity(p: int, row_kind: str, col_kind: str) -> Matrix:
    return Matrix.identity(p, row_kind, col_kind, one=RatFun(ONE), zero=RatFun(ZERO))


def check_inverse_E(mt: MatchedTree, oracle: bool = False) -> CheckResult:
    E = qmatrices.build_E(mt)
    inv = qmatrices.inverse_E_formula(mt)
    res = _compare_matrices(
        "inverse_E", "E . inverse = I", E @ inv, _rf_identity(mt.p, KIND_L, KIND_L)
    )
    if not res.passed:
        return res
    res = _compare_matrices(
        "inverse_E", "inverse . E = I", inv @ E, _rf_identity(mt.p, KIND_R, KIND_R)
    )
    if not res.passed or not oracle:
        return res
    return _compare_matrices(
        "inverse_E", "formula inverse equals elimination oracle",
        inv, exactla.inverse_gauss(E),
    )


def check_inverse_qB(mt: MatchedTree, oracle: bool = False) -> CheckResult:
    qB = qmatrices.build_qB(mt)
    try:
        inv = qmatrices.inverse_qB_formula(mt)
    except BdqZero:
        return CheckResult("inverse_qB", False, {
            "identity": "closed-form inverse of qB",
            "got": "bd_q is identically zero",
            "want": "nonzero bd_q",
            "residual": "0",
        })
    res = _compare_matrices(
        "inverse_qB", "qB . inverse = I", qB @ inv, _rf_identity(mt.p, KIND_L, KIND_L)
    )
    if not res.passed:
        return res
    res = _compare_matrices(
        "inverse_qB", "inverse . qB = I", inv @ qB, _rf_identity(mt.p, KIND_R, KIND_R)
    )
    if not res.passed or not oracle:
        return res
    return _compare_matrices(
        "inverse_qB", "formula inverse equals elimination oracle",
        inv, exactla.inverse_gauss(qB),
    )


def predicted_attach_qL(mt: MatchedTree, v: int) -> Matrix:
    """qL of attach_p2(mt, v) assembled from mt's data by the block update."""
    p = mt.p
    k = mt.index_of[v]
    qL = qmatrices.build_qL(mt)
    mu = qmatrices.qsigned_degree_vector(mt, v)
    rows = []
    if mt.side_of[v] == "L":
        for i in range(p):
            row = list(qL.row(i))
            row[k] = row[k] + _Q2 * mu[i]
            row.append(-mu[i])
            rows.append(row)
        last = [ZERO] * (p + 1)
        last[k] = -_Q2
        last[p] = ONE
        rows.append(last)
    else:
        for i in range(p):
            row = list(qL.row(i))
            if i == k:
                row = [e + _Q2 * m for e, m in zip(row, mu)]
            row.append(-_Q2 if i == k else ZERO)
            rows.append(row)
        rows.append([-m for m in mu] + [ONE])
    return Matrix(rows, KIND_R, KIND_L)


def predicted_attach_tau_r(mt: MatchedTree, v: int) -> Vector:
    """tau_r of attach_p2(mt, v) from mt's tau_r and signed degree data.

    For an R-side attachment the correction on the existing entry carries a
    q^2 factor (forced by the row-sum identity; checked against the direct
    computation on every enumerated tree).
    """
    _, tau_r = qmatrices.qtau(mt)
    k = mt.index_of[v]
    if mt.side_of[v] == "R":
        scale = 1 + treecore.diff(mt, v)
        entries = [
            t - scale * _Q2 if i == k else t for i, t in enumerate(tau_r)
        ]
        entries.append(Poly((scale,)))
    else:
        mu = qmatrices.qsigned_degree_vector(mt, v)
        entries = [t - m for t, m in zip(tau_r, mu)]
        entries.append(ONE)
    return Vector(entries, KIND_R)


def check_attach_update(mt: MatchedTree) -> CheckResult:
    for v in range(mt.tree.n):
        grown = treecore.attach_p2(mt, v)
        res = _compare_matrices(
            "attach_update", f"qL block update at vertex {v}",
            qmatrices.build_qL(grown), predicted_attach_qL(mt, v),
        )
        if not res.passed:
            return CheckResult("attach_update", False, dict(res.witness, vertex=v))
        _, tau_r = qmatrices.qtau(grown)
        res = _compare_vectors(
            "attach_update", f"tau_r update at vertex {v}",
            tau_r, predicted_attach_tau_r(mt, v),
        )
        if not res.passed:
            return CheckResult("attach_update", False, dict(res.witness, vertex=v))
    return CheckResult("attach_update", True)


class DegreeTooSmall(ValueError):
    """Block decomposition needs a split vertex of degree at least 2."""


def block_split_vertices(mt: MatchedTree):
    return [k for k in range(mt.p) if mt.tree.degree(mt.l_vertex(k)) >= 2]


def predicted_block_qL(mt: MatchedTree, k1: int):
    """Reassemble qL from the subtrees split off at the L-vertex of pair k1.

    Returns (permutation of pair indices, predicted matrix); the permutation
    lists the pairs of the component containing the split vertex first (split
    pair last within it), then each branch component with its attachment pair
    first, branches ordered by attachment-vertex id.
    """
    tree = mt.tree
    v = mt.l_vertex(k1)
    partner = mt.r_vertex(k1)
    branch_roots = sorted(w for w in tree.adj[v] if w != partner)
    if not branch_roots:
        raise DegreeTooSmall(f"vertex {v} has degree 1")
    cut = {tuple(sorted((v, w))) for w in branch_roots}

    def component(start):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tree.adj[x]:
                if tuple(sorted((x, y))) in cut or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return seen

    home = component(v)
    block_orders = []
    first = [k for k in range(mt.p) if mt.pairs[k][0] in home and k != k1]
    first.append(k1)
    block_orders.append(first)
    for w in branch_roots:
        comp = component(w)
        kw = mt.index_of[w]
        order = [kw] + [
            k for k in range(mt.p) if mt.pairs[k][0] in comp and k != kw
        ]
        block_orders.append(order)

    s = len(branch_roots) + 1
    sub1, map1 = treecore.sub_matched_tree(mt, block_orders[0])
    k1_pos = len(block_orders[0]) - 1
    mu1 = qmatrices.qsigned_degree_vector(sub1, map1[v])
    blocks = [[None] * s for _ in range(s)]
    top_left = qmatrices.build_qL(sub1)
    e_k1 = Vector(
        (ONE if j == k1_pos else ZERO for j in range(len(block_orders[0]))), KIND_L
    )
    blocks[0][0] = top_left + exactla.outer(mu1, e_k1).scale(_Q2 * (s - 1))
    for b, w in enumerate(branch_roots, start=1):
        order = block_orders[b]
        sub_b, map_b = treecore.sub_matched_tree(mt, order)
        mu_b = qmatrices.qsigned_degree_vector(sub_b, map_b[w])
        blocks[0][b] = exactla.outer(mu1, mu_b).scale(-1)
        corner = [[ZERO] * len(block_orders[0]) for _ in order]
        corner[0][k1_pos] = -_Q2
        blocks[b][0] = Matrix(corner, KIND_R, KIND_L)
        e_first = Vector((ONE,) + (ZERO,) * (len(order) - 1), KIND_R)
        blocks[b][b] = qmatrices.build_qL(sub_b) + exactla.outer(
            e_first, mu_b
        ).scale(_Q2)
        for other in range(1, s):
            if other != b:
                blocks[b][other] = Matrix(
                    [[ZERO] * len(block_orders[other]) for _ in order],
                    KIND_R,
                    KIND_L,
                )

    perm = [k for order in block_orders for k in order]
    rows = []
    for bi in range(s):
        for i in range(len(block_orders[bi])):
            row = []
            for bj in range(s):
                row.extend(blocks[bi][bj].row(i))
            rows.append(row)
    return perm, Matrix(rows, KIND_R, KIND_L), mu1, len(block_orders[0])


def check_block_decomposition(mt: MatchedTree) -> CheckResult:
    splits = block_split_vertices(mt)
    if not splits:
        return CheckResult("block_decomposition", True,
                           skipped="no L-vertex of degree >= 2")
    qL = qmatrices.build_qL(mt)
    for k1 in splits:
        perm, predicted, mu1, width = predicted_block_qL(mt, k1)
        permuted = Matrix(
            ((qL[perm[i], perm[j]] for j in range(mt.p)) for i in range(mt.p)),
            KIND_R,
            KIND_L,
        )
        res = _compare_matrices(
            "block_decomposition", f"qL block reassembly at pair {k1}",
            permuted, predicted,
        )
        if not res.passed:
            return CheckResult(
                "block_decomposition", False, dict(res.witness, split_pair=k1)
            )
        mu_full = qmatrices.qsigned_degree_vector(mt, mt.l_vertex(k1))
        restricted = Vector(
            (
                mu1[i] if i < width else ZERO
                for i in range(mt.p)
            ),
            KIND_R,
        )
        permuted_mu = Vector((mu_full[perm[i]] for i in range(mt.p)), KIND_R)
        res = _compare_vectors(
            "block_decomposition", f"signed degree vector restriction at pair {k1}",
            permuted_mu, restricted,
        )
        if not res.passed:
            return CheckResult(
                "block_decomposition", False, dict(res.witness, split_pair=k1)
            )
    return CheckResult("block_decomposition", True)


def check_q1_properties(mt: MatchedTree) -> CheckResult:
    p = mt.p
    lap = qmatrices.eval_matrix(qmatrices.build_qL(mt), Fraction(1))
    ints = Matrix(
        ((int(e) for e in row) for row in lap.entries), KIND_R, KIND_L
    )

    def fail(label, got, want):
        return CheckResult("q1_properties", False, {
            "identity": label, "got": str(got), "want": str(want),
            "residual": "see got/want",
        })

    for i in range(p):
        if sum(ints.row(i)) != 0:
            return fail(f"row sum {i} of the q=1 Laplacian", sum(ints.row(i)), 0)
        if sum(ints.column(i)) != 0:
            return fail(f"column sum {i} of the q=1 Laplacian", sum(ints.column(i)), 0)
    adj = exactla.adjugate_int(ints)
    if any(e != 1 for row in adj.entries for e in row):
        return fail("adjugate is all-ones", adj.entries, "ones")
    rank = exactla.rank_int(ints)
    if rank != p - 1:
        return fail("rank of the q=1 Laplacian", rank, p - 1)
    symmetric = ints.entries == ints.transpose().entries
    corona = qmatrices.is_corona(mt)
    if symmetric != corona:
        return fail("symmetry iff corona", symmetric, corona)
    B1 = qmatrices.eval_matrix(qmatrices.build_qB(mt), Fraction(1))
    inv = qmatrices.inverse_B_q1(mt)
    eye_L = Matrix.identity(p, KIND_L, KIND_L, one=Fraction(1), zero=Fraction(0))
    eye_R = Matrix.identity(p, KIND_R, KIND_R, one=Fraction(1), zero=Fraction(0))
    if B1 @ inv != eye_L:
        return fail("B . inverse_B = I at q=1", (B1 @ inv).entries, "identity")
    if inv @ B1 != eye_R:
        return fail("inverse_B . B = I at q=1", (inv @ B1).entries, "identity")
    return CheckResult("q1_properties", True)


def check_full_dq_ed(tree: treecore.Tree) -> CheckResult:
    n = tree.n
    det_qd = exactla.det_bareiss(qmatrices.build_full_qD(tree))
    sign = -1 if (n - 1) % 2 else 1
    want_qd = (sign * (n - 1)) * _ONE_PLUS_Q ** (n - 2)
    res = _scalar_result(
        "full_dq_ed", "det qD = (-1)^(n-1) (n-1) (1+q)^(n-2)", det_qd, want_qd
    )
    if not res.passed:
        return res
    det_ed = exactla.det_bareiss(qmatrices.build_full_eD(tree))
    return _scalar_result(
        "full_dq_ed", "det eD = (1-q^2)^(n-1)", det_ed, _ONE_MINUS_Q2 ** (n - 1)
    )


# ---------------------------------------------------------------------------
# suite runners
# ---------------------------------------------------------------------------

ORACLE_MAX_P = 5


def run_suite(mt: MatchedTree, oracle: bool | None = None) -> VerificationReport:
    """Every applicable symbolic check on one tree, in registry order."""
    if oracle is None:
        oracle = mt.p <= ORACLE_MAX_P
    results = (
        check_det_E(mt),
        check_det_qL(mt),
        check_bdq(mt),
        check_sum_mu(mt),
        check_row_col_sums(mt),
        check_B_tau(mt),
        check_lemma_111(mt),
        check_inverse_E(mt, oracle=oracle),
        check_inverse_qB(mt, oracle=oracle),
        check_attach_update(mt),
        check_block_decomposition(mt),
        check_q1_properties(mt),
        check_full_dq_ed(mt.tree),
    )
    return VerificationReport(
        treecore.canonical_code(mt.tree), mt.p, results
    )


def _suite_worker(payload):
    data, oracle = payload
    report = run_suite(MatchedTree.from_json(data), oracle=oracle)
    return report


def run_enumerated(max_vertices: int, threads: int = 1,
                   oracle_max_p: int = ORACLE_MAX_P):
    """Symbolic suite over every nonsingular tree with 2p <= max_vertices."""
    trees = []
    for p in range(1, max_vertices // 2 + 1):
        trees.extend(treecore.enumerate_nonsingular(p))
    if threads > 1:
        payloads = [(t.to_json(), t.p <= oracle_max_p) for t in trees]
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_suite_worker, payloads, chunksize=4))
    else:
        reports = [run_suite(t, oracle=t.p <= oracle_max_p) for t in trees]
    reports.sort(key=lambda r: (r.p, r.tree_code))
    return reports


def summary_line(reports) -> str:
    checks = sum(len(r.results) for r in reports)
    fails = sum(1 for r in reports for c in r.results if not c.passed)
    return f"TREES {len(reports)} CHECKS {checks} FAIL {fails}"


# ---------------------------------------------------------------------------
# exact evaluation at rational points (large random trees)
# ---------------------------------------------------------------------------

EXCLUDED_POINTS = (Fraction(0), Fraction(1), Fraction(-1))
DEFAULT_Q_POINTS = (
    Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-2), Fraction(5, 3)
)


def _imatmul(a, b):
    bt = list(zip(*b))
    return [[sum(map(mul, row, col)) for col in bt] for row in a]


def _poly_int_eval(poly: Poly, a: int, b: int, scale_deg: int) -> int:
    # poly(a/b) * b^scale_deg, exact; needs scale_deg >= deg poly
    return sum(c * a**i * b ** (scale_deg - i) for i, c in enumerate(poly.coeffs))


def evaluate_identities_at(mt: MatchedTree, q0: Fraction) -> list[CheckResult]:
    """The five product identities at one exact rational point.

    Matrices are cleared to integers against powers of the denominator so the
    two big matrix products run over plain integers; comparisons reintroduce
    the exact scale factors.  Nothing here is approximate.
    """
    q0 = Fraction(q0)
    if q0 in EXCLUDED_POINTS:
        raise ValueError(f"q = {q0} is an excluded evaluation point")
    a, b = q0.numerator, q0.denominator
    p = mt.p
    tag = f"@{q0}"
    tree = mt.tree
    dist = treecore.distances(tree)
    dmax = max(max(row) for row in dist)

    apow = [1] * (dmax + 1)
    bpow = [1] * (dmax + 1)
    for i in range(1, dmax + 1):
        apow[i] = apow[i - 1] * a
        bpow[i] = bpow[i - 1] * b
    # [d] at a/b, scaled by b^(dmax-1)
    qint_s = [0] * (dmax + 1)
    for d in range(1, dmax + 1):
        qint_s[d] = qint_s[d - 1] + apow[d - 1] * bpow[dmax - d]
    sB = Fraction(1, bpow[dmax - 1])
    sE = Fraction(1, bpow[dmax])

    ls, rs = mt.l_vertices, mt.r_vertices
    qB = [[qint_s[dist[l][r]] for r in rs] for l in ls]
    E = [[apow[dist[l][r]] * bpow[dmax - dist[l][r]] for r in rs] for l in ls]

    qL_poly = qmatrices.build_qL(mt)
    qL = [[_poly_int_eval(e, a, b, 4) for e in row] for row in qL_poly.entries]
    sL = Fraction(1, b**4)

    tau_l_poly, tau_r_poly = qmatrices.qtau(mt)
    tau_l = [_poly_int_eval(e, a, b, 2) for e in tau_l_poly]
    tau_r = [_poly_int_eval(e, a, b, 2) for e in tau_r_poly]
    sT = Fraction(1, b**2)

    bd_poly = qmatrices.bdq_recursive(mt)
    bd_val = bd_poly.eval_at(q0)

    results = []

    def record(name, label, bad, skipped=None):
        witness = None
        if bad is not None:
            index, got, want = bad
            witness = {
                "identity": label,
                "entry": list(index),
                "got": str(got),
                "want": str(want),
                "residual": str(got - want),
            }
        results.append(CheckResult(name + tag, bad is None, witness, skipped=skipped))

    # 1: qB tau_r = bd ones, tau_l^t qB = bd ones^t
    def btau_mismatch():
        for i, row in enumerate(qB):
            got = sum(map(mul, row, tau_r)) * sB * sT
            if got != bd_val:
                return (i,), got, bd_val
        for j, col in enumerate(zip(*qB)):
            got = sum(map(mul, col, tau_l)) * sB * sT
            if got != bd_val:
                return (j,), got, bd_val
        return None

    record("B_tau", "qB tau = bd_q ones at a point", btau_mismatch())

    # 2: row/col sums of qL against (1-q0^2) tau
    factor = 1 - q0 * q0

    def sums_mismatch():
        for i, (row, t) in enumerate(zip(qL, tau_r)):
            got, want = sum(row) * sL, factor * t * sT
            if got != want:
                return (i,), got, want
        for j, (col, t) in enumerate(zip(zip(*qL), tau_l)):
            got, want = sum(col) * sL, factor * t * sT
            if got != want:
                return (j,), got, want
        return None

    record("row_col_sums", "qL sums vs tau at a point", sums_mismatch())

    # 3: -qL.qB + (1+q) tau_r ones^t = q(1+q) I
    prod_LB = _imatmul(qL, qB)
    sLB = sL * sB
    one_plus = 1 + q0

    def lemma_mismatch():
        diag = q0 * one_plus
        for i in range(p):
            ti = one_plus * tau_r[i] * sT
            rowi = prod_LB[i]
            for j in range(p):
                got = -(rowi[j] * sLB) + ti
                want = diag if i == j else 0
                if got != want:
                    return (i, j), got, want
        return None

    record("lemma_111", "lemma 111 at a point", lemma_mismatch())

    # 4: inverse of E as qL/(q(1-q^2)):  qL.E = q(1-q^2) I
    prod_LE = _imatmul(qL, E)
    sLE = sL * sE

    def inv_e_mismatch():
        diag = q0 * (1 - q0 * q0)
        for i in range(p):
            for j in range(p):
                got = prod_LE[i][j] * sLE
                want = diag if i == j else 0
                if got != want:
                    return (i, j), got, want
        return None

    record("inverse_E_product", "qL.E = q(1-q^2) I at a point", inv_e_mismatch())

    # 5: inverse of qB: (-qL/(q(1+q)) + tau_r tau_l^t/(q bd)) . qB = I
    if bd_val == 0:
        record("inverse_qB_product", "inverse_qB product at a point", None,
               skipped="bd_q vanishes at this point")
    else:
        w = [sum(map(mul, col, tau_l)) for col in zip(*qB)]
        c1 = Fraction(-1) / (q0 * one_plus)
        c2 = Fraction(1) / (q0 * bd_val)

        def inv_b_mismatch():
            for i in range(p):
                ti = tau_r[i] * sT
                rowi = prod_LB[i]
                for j in range(p):
                    got = c1 * (rowi[j] * sLB) + c2 * (ti * (w[j] * sT * sB))
                    want = 1 if i == j else 0
                    if got != want:
                        return (i, j), got, want
            return None

        record("inverse_qB_product", "inverse_qB product at a point",
               inv_b_mismatch())

    return results


def run_random(p: int, trials: int, seed: int, q_points=DEFAULT_Q_POINTS):
    """Evaluated suite on random trees; one report per (trial, all points)."""
    points = [Fraction(x) for x in q_points]
    for x in points:
        if x in EXCLUDED_POINTS:
            raise ValueError(f"q = {x} is an excluded evaluation point")
    reports = []
    for t in range(trials):
        mt = treecore.random_nonsingular(p, seed + t)
        results = []
        for x in points:
            results.extend(evaluate_identities_at(mt, x))
        reports.append(VerificationReport(
            treecore.canonical_code(mt.tree), mt.p, tuple(results)
        ))
    return reports
