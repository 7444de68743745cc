import io
from itertools import combinations, product
from math import comb

import pytest
from pysat.formula import CNF
from pysat.solvers import Minisat22

from admissible.bruteforce import admissible_grid, exists_I_bruteforce, f_max_bruteforce
from admissible.construct import construct_I
from admissible.core import (
    TernaryVector,
    VectorFamily,
    is_admissible,
    is_I_set,
    is_pair_clash,
    is_triple_clash_scalar,
    project,
)
from admissible.engine import Budget, ClashModel, run_maximise
from admissible.search import (
    FMaxResult,
    ModelError,
    SearchConfig,
    SearchOutcome,
    Status,
    VarMap,
    cnf_clauses,
    decode_model,
    exists_I,
    export_cnf,
    f_max,
    parse_model,
    read_varmap,
)
from admissible.typed import enumerate_typed

SYMMETRY = [(s, p) for s in (True, False) for p in (True, False)]
ORACLE_GRID = [
    (m, w) for m in range(1, 8) for w in range(1, m + 1)
    if comb(m, w) <= 5 and 2 ** (w * comb(m, w)) <= 2**24
]


def cfg(star=True, perm=True, **kw):
    return SearchConfig(star_symmetry=star, permutation_symmetry=perm, **kw)


class TestExistsI:
    @pytest.mark.parametrize("m, w", [(6, 4), (5, 4), (7, 4), (7, 5), (8, 4), (9, 5)])
    def test_found_and_verified(self, m, w):
        res = exists_I(m, w)
        assert res.status is Status.FOUND
        assert is_I_set(res.witness, m, w) and is_admissible(res.witness)

    def test_5_4_agrees_with_construction(self):
        assert is_admissible(construct_I(5, 4))
        assert exists_I(5, 4).status is Status.FOUND

    @pytest.mark.parametrize("m, w", ORACLE_GRID)
    @pytest.mark.parametrize("star, perm", SYMMETRY)
    def test_matches_product_enumeration(self, m, w, star, perm):
        want = exists_I_bruteforce(m, w)
        got = exists_I(m, w, cfg(star, perm))
        assert (got.status is Status.FOUND) == want
        assert got.status is not Status.LIMIT_REACHED

    @pytest.mark.parametrize("m", range(2, 8))
    @pytest.mark.parametrize("star, perm", SYMMETRY)
    def test_symmetry_never_flips_status(self, m, star, perm):
        for w in range(1, m + 1):
            if comb(m, w) > 35:
                continue
            base = exists_I(m, w, cfg(False, False)).status
            assert exists_I(m, w, cfg(star, perm)).status is base

    @pytest.mark.parametrize("order", ["colex", "lex"])
    def test_seed_orders(self, order):
        res = exists_I(7, 4, SearchConfig(seed_order=order))
        assert res.status is Status.FOUND and is_I_set(res.witness, 7, 4)

    @pytest.mark.parametrize("threads", [1, 2, 4])
    def test_status_independent_of_threads(self, threads):
        for m, w in [(5, 4), (6, 4), (6, 3), (7, 5)]:
            res = exists_I(m, w, SearchConfig(threads=threads))
            assert res.status is Status.FOUND
            assert is_I_set(res.witness, m, w) and is_admissible(res.witness)

    def test_node_limit_reports_limit(self):
        res = exists_I(12, 4, SearchConfig(node_limit=50))
        assert res.status is Status.LIMIT_REACHED and res.witness is None
        assert res.nodes >= 50

    def test_time_limit_reports_limit(self):
        res = exists_I(12, 4, SearchConfig(time_limit=0.5))
        assert res.status in (Status.LIMIT_REACHED, Status.FOUND)
        assert res.elapsed < 5

    def test_monotonicity_via_projection(self):
        # Found at (m+1, w) forces Found at (m, w) and (m, w-1); no Exhausted
        # instance is reachable at this size, so check the contrapositive.
        for m in range(3, 8):
            for w in range(2, m):
                res = exists_I(m + 1, w)
                if res.status is Status.FOUND:
                    z = project(res.witness, m, "zero")
                    nz = project(res.witness, m, "nonzero")
                    assert is_I_set(z, m, w) and is_admissible(z)
                    assert is_I_set(nz, m, w - 1) and is_admissible(nz)
                    assert exists_I(m, w).status is Status.FOUND
                    assert exists_I(m, w - 1).status is Status.FOUND

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            exists_I(3, 0)
        with pytest.raises(ValueError):
            SearchConfig(threads=0)
        with pytest.raises(ValueError):
            SearchConfig(node_limit=0)
        with pytest.raises(ValueError):
            SearchConfig(seed_order="random")

    def test_outcome_invariant(self):
        with pytest.raises(ValueError):
            SearchOutcome(Status.FOUND, None, 0, 0.0)
        with pytest.raises(ValueError):
            SearchOutcome(Status.EXHAUSTED, construct_I(3, 2), 0, 0.0)


class TestFMax:
    @pytest.mark.parametrize("m, w, value", [(5, 4, 5), (3, 2, 3), (4, 4, 1), (7, 7, 1)])
    def test_examples(self, m, w, value):
        res = f_max(m, w)
        assert (res.value, res.exact) == (value, True)
        assert len(res.witness) == value and is_admissible(res.witness)

    @pytest.mark.parametrize("m", range(1, 5))
    @pytest.mark.parametrize("star, perm", SYMMETRY)
    def test_matches_bruteforce(self, m, star, perm):
        for w in range(1, m + 1):
            res = f_max(m, w, cfg(star, perm))
            assert res.exact
            assert res.value == f_max_bruteforce(m, w)
            assert (res.value == comb(m, w)) == exists_I_bruteforce(m, w)

    @pytest.mark.parametrize("threads", [1, 3])
    def test_threads(self, threads):
        res = f_max(5, 3, SearchConfig(threads=threads))
        assert res.value == 10 and res.exact


def typed_max_bruteforce(m, w, t):
    """Largest clash-free family of type-t weight-w vectors, by enumeration."""
    sups = list(combinations(range(m), w))
    cands = [[None] + enumerate_typed(s, t, m) for s in sups]
    best = 0
    for pick in product(*cands):
        vs = [v for v in pick if v is not None]
        if len(vs) <= best:
            continue
        if any(is_pair_clash(a, b) for a, b in combinations(vs, 2)):
            continue
        if any(is_triple_clash_scalar(a, b, c) for a, b, c in combinations(vs, 3)):
            continue
        best = len(vs)
    return best


@pytest.mark.parametrize("t", [(1, 1), (2, 2), (1, 2, 1, 1), (2, 1, 1)])
def test_branch_and_bound_below_ceiling(t):
    # type restrictions leave no I(5,4) family, so the bound has real work to do
    model = ClashModel(5, 4)
    low = (1 << len(t)) - 1
    prefix = sum(1 << p for p, x in enumerate(t) if x == 2)
    typed = sum(1 << c for c in range(model.nchoices) if c & low == prefix)
    best, exact = run_maximise(model, [typed] * len(model.supports), Budget())
    assert exact
    want = typed_max_bruteforce(5, 4, t)
    assert want < 5
    assert best.value == want
    fam = model.family(best.assignment)
    assert len(fam) == want and is_admissible(fam)


def _solve(clauses, extra=()):
    with Minisat22(bootstrap_with=list(clauses) + [list(c) for c in extra]) as s:
        return s.get_model() if s.solve() else None


class TestCNF:
    def test_variable_count_and_header(self):
        buf = io.StringIO()
        vm = export_cnf(5, 4, buf)
        text = buf.getvalue()
        assert vm.nvars == comb(5, 4) * 4 == 20
        assert "c admissible I(m,w) existence m=5 w=4" in text
        assert "binary encoding" in text
        p_line = next(l for l in text.splitlines() if l.startswith("p "))
        _, _, nv, nc = p_line.split()
        assert int(nv) == 20
        assert int(nc) == sum(1 for l in text.splitlines() if l and l[0] not in "cp")
        assert read_varmap(text) == vm

    def test_binary_sink(self):
        buf = io.BytesIO()
        export_cnf(3, 2, buf)
        assert buf.getvalue().startswith(b"c admissible")

    def test_round_trip_with_external_solver(self, tmp_path):
        path = tmp_path / "i54.cnf"
        with open(path, "w") as fh:
            export_cnf(5, 4, fh)
        varmap = read_varmap(path.read_text())
        model = _solve(CNF(from_file=str(path)).clauses)
        fam = decode_model(model, varmap)
        assert is_I_set(fam, 5, 4) and is_admissible(fam)

    def test_pinned_clash_is_unsat(self):
        varmap, clauses = cnf_clauses(5, 4)
        # type-11 vectors on the supports of the type-11 clash
        pinned = ["11011", "11101", "01111"]
        units = []
        for v in (TernaryVector.from_string(s) for s in pinned):
            for var, (pos, coord) in varmap.entries.items():
                if v.nonzero == sum(1 << i for i in pos):
                    units.append([var if v[coord] == 2 else -var])
        assert len(units) == 12
        assert _solve(clauses, units) is None
        assert _solve(clauses) is not None

    def test_weight_one_has_no_constraints(self):
        varmap, clauses = cnf_clauses(4, 1)
        assert clauses == [] and varmap.nvars == 4
        assert admissible_grid(4, 1).all()

    @pytest.mark.parametrize("m, w", [(3, 2), (4, 2), (4, 3)])
    def test_model_count_matches_enumeration(self, m, w):
        varmap, clauses = cnf_clauses(m, w)
        count = 0
        with Minisat22(bootstrap_with=clauses) as s:
            for model in s.enum_models():
                model = [l for l in model if abs(l) <= varmap.nvars]
                fam = decode_model(model, varmap)
                assert is_I_set(fam, m, w)
                count += 1
        assert count == int(admissible_grid(m, w).sum())

    def test_all_false_model_decodes_to_all_ones(self):
        varmap, _ = cnf_clauses(5, 4)
        fam = decode_model([-v for v in varmap.entries], varmap, verify=False)
        assert all(set(v.entries) <= {0, 1} for v in fam)
        assert len(fam) == 5
        with pytest.raises(ModelError):
            decode_model([-v for v in varmap.entries], varmap)

    def test_truncated_model(self):
        varmap, _ = cnf_clauses(5, 4)
        with pytest.raises(ModelError):
            decode_model(list(range(1, 10)), varmap)

    def test_contradictory_model(self):
        varmap, _ = cnf_clauses(3, 2)
        with pytest.raises(ModelError):
            decode_model([1, -1] + list(range(2, 7)), varmap)

    def test_parse_model_formats(self):
        assert parse_model("s SATISFIABLE\nv 1 -2 3\nv -4 0\n") == [1, -2, 3, -4]
        assert parse_model("1 -2 3 0\n") == [1, -2, 3]
        with pytest.raises(ModelError):
            parse_model("s UNSATISFIABLE\n")

    def test_read_varmap_rejects_foreign_cnf(self):
        with pytest.raises(ModelError):
            read_varmap("c something else\np cnf 1 1\n1 0\n")
