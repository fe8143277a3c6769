"""Acceptance criteria 1-8.

Each test prints one PASS/FAIL line and adds it to the summary shown at the
end of the pytest run. Expected values come from hand counts or from the
oracles below, which share no evaluation code with the package.
"""

import contextlib
import itertools
import random
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from causal_multiteams.core import CausalFunction, CausalMultiteam, FunctionComponent, Multiteam, Signature
from causal_multiteams.enumeration import FormulaGenerator
from causal_multiteams.formula import (
    And,
    Bot,
    Cf,
    Eq,
    Gdisj,
    NE,
    Neq,
    PrCmp,
    PrConst,
    Sup,
    Tensor,
    Top,
    is_co,
    parse,
)
from causal_multiteams.rescaling import (
    FiniteClass,
    canonical,
    check_definability,
    is_rescaling,
    phi_formula,
    scale,
    theta_formula,
    theta_k_formula,
)
from causal_multiteams.sem_bridge import joint_prob, multiteam_to_sem, sem_to_multiteam
from causal_multiteams.semantics import intervene, prob, restrict, sat, satisfies_mixed
from causal_multiteams.transforms import compile_cneg, normal_form


@contextlib.contextmanager
def criterion(log, number, title, budget):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        print(line)
        log.append(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} [{elapsed:.2f}s, budget {budget}s]"
    print(line)
    log.append(line)
    assert ok, line


# -- independent oracle over two binary variables ---------------------------
#
# Models are (law id, sorted row tuple). Laws are written out by hand: no law,
# or one variable copying / negating the other. Rows are (x, y) string pairs.

V = ("X", "Y")
IDX = {"X": 0, "Y": 1}
ROWS = [(x, y) for x in "01" for y in "01"]
LAWS = [
    {},
    {"Y": ("X", {"0": "0", "1": "1"})},
    {"Y": ("X", {"0": "1", "1": "0"})},
    {"X": ("Y", {"0": "0", "1": "1"})},
    {"X": ("Y", {"0": "1", "1": "0"})},
]


def obeys(row, laws):
    return all(row[IDX[v]] == table[row[IDX[parent]]] for v, (parent, table) in laws.items())


def oracle_universe(bound=4):
    models = []
    for lid, laws in enumerate(LAWS):
        ok = [r for r in ROWS if obeys(r, laws)]
        for n in range(bound + 1):
            for combo in itertools.combinations_with_replacement(ok, n):
                models.append((lid, tuple(sorted(combo))))
    return models


def law_id(laws):
    return LAWS.index(laws)


def o_intervene_row(row, laws, pairs):
    fixed = dict(pairs)
    new = list(row)
    for v, x in fixed.items():
        new[IDX[v]] = x
    kept = {v: law for v, law in laws.items() if v not in fixed}
    for _ in V:  # fixpoint; at most one law survives here
        for v, (parent, table) in kept.items():
            new[IDX[v]] = table[new[IDX[parent]]]
    return tuple(new), kept


def consistent(pairs):
    seen = {}
    return all(seen.setdefault(v, x) == x for v, x in pairs)


def o_row(row, laws, f):
    """Truth of a CO formula on the one-row team {row}."""
    if isinstance(f, Eq):
        return row[IDX[f.var]] == f.value
    if isinstance(f, Neq):
        return row[IDX[f.var]] != f.value
    if isinstance(f, And):
        return o_row(row, laws, f.left) and o_row(row, laws, f.right)
    if isinstance(f, Tensor):
        # the only splits of a one-row team put it wholly on one side
        return o_row(row, laws, f.left) or o_row(row, laws, f.right)
    if isinstance(f, Sup):
        return not o_row(row, laws, f.antecedent) or o_row(row, laws, f.consequent)
    if isinstance(f, Cf):
        if not consistent(f.antecedent):
            return True
        new, kept = o_intervene_row(row, laws, f.antecedent)
        return o_row(new, kept, f.consequent)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    raise TypeError(f)


class Universe:
    """Every model with at most four rows and boolean semantic vectors over them."""

    def __init__(self):
        self.models = oracle_universe()
        self.index = {m: i for i, m in enumerate(self.models)}
        self.n = len(self.models)
        self.singles = [self.index[(lid, (r,))] for lid, laws in enumerate(LAWS) for r in ROWS if obeys(r, laws)]
        self.single_of = {self.models[i]: i for i in self.singles}
        self.empty = np.array([len(rows) == 0 for _, rows in self.models])
        # tensor: every split of the row multiset into two parts
        J, K, offsets = [], [], []
        for lid, rows in self.models:
            offsets.append(len(J))
            c = Counter(rows)
            keys = sorted(c)
            for part in itertools.product(*(range(c[k] + 1) for k in keys)):
                left = tuple(sorted(itertools.chain.from_iterable([k] * p for k, p in zip(keys, part))))
                right = tuple(sorted(itertools.chain.from_iterable([k] * (c[k] - p) for k, p in zip(keys, part))))
                J.append(self.index[(lid, left)])
                K.append(self.index[(lid, right)])
        self.J, self.K, self.offsets = np.array(J), np.array(K), np.array(offsets)
        # flatness: one-row models of each nonempty model
        flat, foff, self.nonempty = [], [], []
        for i, (lid, rows) in enumerate(self.models):
            if rows:
                self.nonempty.append(i)
                foff.append(len(flat))
                flat.extend(self.index[(lid, (r,))] for r in rows)
        self.flat, self.foff, self.nonempty = np.array(flat), np.array(foff), np.array(self.nonempty)
        self._restrict_cache = {}
        self._cf = {}

    def literal(self, f):
        return np.array([all(o_row(r, LAWS[lid], f) for r in rows) for lid, rows in self.models])

    def intervention(self, pairs):
        if pairs not in self._cf:
            out = []
            for lid, rows in self.models:
                new_rows = [o_intervene_row(r, LAWS[lid], pairs)[0] for r in rows]
                kept = {v: law for v, law in LAWS[lid].items() if v not in dict(pairs)}
                out.append(self.index[(law_id(kept), tuple(sorted(new_rows)))])
            self._cf[pairs] = np.array(out)
        return self._cf[pairs]

    def restriction(self, alpha_vec):
        key = alpha_vec[self.singles].tobytes()
        if key not in self._restrict_cache:
            out = []
            for lid, rows in self.models:
                kept = tuple(r for r in rows if alpha_vec[self.single_of[(lid, (r,))]])
                out.append(self.index[(lid, kept)])
            self._restrict_cache[key] = np.array(out)
        return self._restrict_cache[key]

    def tensor(self, va, vb):
        """Batch: va (..., n), vb (..., n) broadcastable; returns the split verdicts."""
        pairs = va[..., self.J] & vb[..., self.K]
        return np.logical_or.reduceat(pairs, self.offsets, axis=-1)

    def flatness_holds(self, v):
        """True where the verdict equals the conjunction of one-row verdicts."""
        per_row = np.logical_and.reduceat(v[..., self.flat], self.foff, axis=-1)
        return bool(np.all(v[..., self.nonempty] == per_row)) and bool(np.all(v[..., self.empty]))

    def to_model(self, i):
        lid, rows = self.models[i]
        return library_model(lid, rows)


BIN = Signature(V, (("0", "1"), ("0", "1")))


def library_laws(lid):
    return FunctionComponent([CausalFunction(v, [p], {(k,): x for k, x in t.items()}) for v, (p, t) in LAWS[lid].items()])


def library_model(lid, rows):
    return CausalMultiteam(BIN, Multiteam.from_rows(rows), library_laws(lid))


LITERALS = [cls(v, x) for cls in (Eq, Neq) for v in V for x in "01"]
ANTECEDENTS = (
    [((v, x),) for v in V for x in "01"]
    + [(("X", x), ("Y", y)) for x in "01" for y in "01"]
    + [((v, "0"), (v, "1")) for v in V]
)


@pytest.fixture(scope="module")
def universe():
    return Universe()


@pytest.fixture(scope="module")
def lib_models(universe):
    return [universe.to_model(i) for i in range(universe.n)]


# -- criterion 1 --------------------------------------------------------------


def test_criterion_1_reference_values(acceptance_log):
    coin_sig = Signature(V, (("heads", "tails"), ("heads", "tails")))
    coin = CausalMultiteam(coin_sig, Multiteam.from_rows([(a, b) for a in ("tails", "heads") for b in ("tails", "heads")]), FunctionComponent())
    s3 = CausalMultiteam(BIN, Multiteam({("0", "0"): 2, ("0", "1"): 1}), FunctionComponent())
    with criterion(acceptance_log, 1, "table values (2/3, 3/4, global disjunction, non-downward-closure)", 1):
        assert prob(s3, parse("Y=0")) == Fraction(2, 3)
        assert prob(coin, parse("X=heads | Y=tails")) == Fraction(3, 4)
        assert sat(coin, parse("Pr(X=heads) == 1/2 \\/ Pr(Y=tails) == 1/2"))
        tails = restrict(coin, parse("X=tails"))
        assert tails.size == 2
        assert sat(coin, parse("Pr(X=tails) <= 1/2"))
        assert not sat(tails, parse("Pr(X=tails) <= 1/2"))


# -- criterion 2 --------------------------------------------------------------


def depth_two(universe):
    """All CO formulas of depth <= 2 over the literals, with oracle vectors."""
    forms = list(LITERALS)
    vecs = [universe.literal(f) for f in LITERALS]
    lit = np.array(vecs)
    for i, a in enumerate(LITERALS):
        for j, b in enumerate(LITERALS):
            forms.append(And(a, b))
            vecs.append(lit[i] & lit[j])
            forms.append(Tensor(a, b))
            vecs.append(universe.tensor(lit[i], lit[j]))
            forms.append(Sup(a, b))
            vecs.append(lit[j][universe.restriction(lit[i])])
    for pairs in ANTECEDENTS:
        for j, b in enumerate(LITERALS):
            forms.append(Cf(pairs, b))
            vecs.append(lit[j][universe.intervention(pairs)] if consistent(pairs) else np.ones(universe.n, bool))
    return forms, np.array(vecs)


def test_criterion_2_flatness_and_empty(acceptance_log, universe, lib_models):
    with criterion(acceptance_log, 2, "flatness on all depth-3 CO formulas over 130 models; empty model on 200 formulas", 30):
        assert universe.n == 130
        forms, A = depth_two(universe)
        assert len(forms) == 280
        checked = len(forms)
        assert universe.flatness_holds(A)
        # depth three, every combination, built from the depth-two vectors
        for a in range(len(forms)):
            assert universe.flatness_holds(A[a] & A)
            assert universe.flatness_holds(universe.tensor(A[a][None, :], A))
            assert universe.flatness_holds(A[:, universe.restriction(A[a])])
            checked += 3 * len(forms)
        for pairs in ANTECEDENTS:
            if consistent(pairs):
                assert universe.flatness_holds(A[:, universe.intervention(pairs)])
            checked += len(forms)
        assert checked == 280 + 3 * 280 * 280 + 10 * 280

        # the library agrees with the oracle on every depth <= 2 formula
        for f, v in zip(forms, A):
            got = np.array([sat(m, f) for m in lib_models])
            assert np.array_equal(got, v), f
        # and on a seeded sample of depth-3 formulas
        rng = random.Random(2024)
        for _ in range(600):
            kind = rng.randrange(4)
            a, b = rng.randrange(len(forms)), rng.randrange(len(forms))
            if kind == 0:
                f, v = And(forms[a], forms[b]), A[a] & A[b]
            elif kind == 1:
                f, v = Tensor(forms[a], forms[b]), universe.tensor(A[a], A[b])
            elif kind == 2:
                f, v = Sup(forms[a], forms[b]), A[b][universe.restriction(A[a])]
            else:
                pairs = rng.choice(ANTECEDENTS)
                f = Cf(pairs, forms[b])
                v = A[b][universe.intervention(pairs)] if consistent(pairs) else np.ones(universe.n, bool)
            got = np.array([sat(m, f) for m in lib_models])
            assert np.array_equal(got, v), f

        gen = FormulaGenerator(BIN, random.Random(7))
        empties = [m for m in lib_models if m.is_empty()]
        assert len(empties) == len(LAWS)
        for _ in range(200):
            f = gen.pco(4)
            assert all(sat(m, f) for m in empties), f


# -- criteria 3 and 4 ---------------------------------------------------------


PR_ATOMS = (PrConst, PrCmp)


def nf_shape_ok(f):
    """Conjunctions and global disjunctions over the four leaf shapes."""
    if isinstance(f, And):
        return nf_shape_ok(f.left) and nf_shape_ok(f.right)
    if isinstance(f, Gdisj):
        return all(nf_shape_ok(d) for d in f.disjuncts)
    if isinstance(f, PR_ATOMS):
        return True
    if isinstance(f, Cf):
        return isinstance(f.consequent, PR_ATOMS)
    if isinstance(f, Sup):
        c = f.consequent
        return is_co(f.antecedent) and (isinstance(c, PR_ATOMS) or (isinstance(c, Cf) and isinstance(c.consequent, PR_ATOMS)))
    return False


def corpus(universe):
    gen = FormulaGenerator(BIN, random.Random(31))
    formulas = [gen.pco(4) for _ in range(300)]
    step = universe.n // 30
    models = [universe.to_model(i) for i in range(0, step * 30, step)]
    return formulas, models


def test_criterion_3_normal_form(acceptance_log, universe):
    with criterion(acceptance_log, 3, "normal form equivalent on 300 formulas x 30 models, shape conditions hold", 120):
        formulas, models = corpus(universe)
        assert len(models) == 30 and any(m.is_empty() for m in models)
        for f in formulas:
            nf = normal_form(f, BIN).formula
            assert nf_shape_ok(nf), nf
            for m in models:
                assert sat(m, nf) == sat(m, f), (f, m)


def test_criterion_4_cneg(acceptance_log, universe):
    with criterion(acceptance_log, 4, "exactly one of phi, phi^C on nonempty models", 60):
        formulas, models = corpus(universe)
        models = [m for m in models if not m.is_empty()]
        for f in formulas:
            neg = compile_cneg(f, BIN)
            for m in models:
                assert sat(m, f) != sat(m, neg), (f, m)


# -- criterion 5 --------------------------------------------------------------


def count_prob(rows, laws, alpha, gamma):
    """P(alpha | gamma) over a list of rows, None when gamma never holds."""
    cond = [r for r in rows if o_row(r, laws, gamma)]
    if not cond:
        return None
    return Fraction(sum(o_row(r, laws, alpha) for r in cond), len(cond))


def test_criterion_5_mixed(acceptance_log, universe):
    with criterion(acceptance_log, 5, "do-form and Pearl-form verdicts match direct counting on 100 tuples", 30):
        rng = random.Random(55)
        gen = FormulaGenerator(BIN, rng)
        nonempty = [i for i in range(universe.n) if universe.models[i][1]]
        for _ in range(100):
            i = rng.choice(nonempty)
            lid, rows = universe.models[i]
            rows = [r for r in rows for _ in range(rng.randint(1, 2))]
            m = library_model(lid, rows)
            laws = LAWS[lid]
            gamma, alpha = gen.co(2), gen.co(2)
            pairs = gen.pairs(allow_inconsistent=False)
            eps = rng.choice([Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)])

            after = [o_intervene_row(r, laws, pairs)[0] for r in rows]
            kept = {v: law for v, law in laws.items() if v not in dict(pairs)}
            p_do = count_prob(after, kept, alpha, gamma)
            p_pearl = count_prob(rows, laws, Cf(pairs, alpha), gamma)

            do_form = Cf(pairs, Sup(gamma, PrConst(alpha, ">=", eps)))
            pearl_form = Sup(gamma, Cf(pairs, PrConst(alpha, ">=", eps)))
            assert sat(m, do_form) == (p_do is None or p_do >= eps)
            assert sat(m, pearl_form) == (p_pearl is None or p_pearl >= eps)
            rep = satisfies_mixed(m, gamma, pairs, alpha, ">=", eps)
            assert (rep.do_prob, rep.pearl_prob) == (p_do, p_pearl)


# -- criterion 6 --------------------------------------------------------------


CHAIN = Signature(("A", "B", "C"), (("0", "1"), ("0", "1", "2"), ("0", "1")))


def chain_models(rng, n):
    """Random models where B copies A (shifted) and C is B > 0."""
    laws = FunctionComponent(
        [
            CausalFunction("B", ["A"], {("0",): "1", ("1",): "2"}),
            CausalFunction("C", ["B"], {("0",): "0", ("1",): "1", ("2",): "0"}),
        ]
    )
    good = [("0", "1", "1"), ("1", "2", "0")]
    out = []
    for _ in range(n):
        counts = {r: rng.randint(0, 4) for r in good}
        if not any(counts.values()):
            counts[good[0]] = 1
        out.append(CausalMultiteam(CHAIN, Multiteam(counts), laws))
    return out


def test_criterion_6_sem_bridge(acceptance_log, universe):
    with criterion(acceptance_log, 6, "SEM round trip on 50 models; joint distribution equals model probability", 30):
        rng = random.Random(66)
        picks = rng.sample([i for i in range(universe.n) if universe.models[i][1]], 40)
        models = [library_model(universe.models[i][0], [r for r in universe.models[i][1] for _ in range(rng.randint(1, 3))]) for i in picks]
        models += chain_models(rng, 10)
        assert len(models) == 50
        for m in models:
            sem = multiteam_to_sem(m)
            back = sem_to_multiteam(sem)
            assert canonical(back) == canonical(m)
            rows = [s for s, c in m.team.items() for _ in range(c)]
            events = [[(v, x)] for v in m.sig.dom for x in m.sig.ran(v)]
            events += [
                [(v, x), (w, y)]
                for v, w in itertools.combinations(m.sig.dom, 2)
                for x in m.sig.ran(v)
                for y in m.sig.ran(w)
            ]
            for event in events:
                direct = Fraction(sum(all(s[m.sig.index(v)] == x for v, x in event) for s in rows), len(rows))
                assert joint_prob(sem, event) == direct
                assert prob(m, And(Eq(*event[0]), Eq(*event[-1]))) == direct


# -- criterion 7 --------------------------------------------------------------


def distribution(rows):
    n = len(rows)
    return {r: Fraction(c, n) for r, c in Counter(rows).items()}


def test_criterion_7_rescaling(acceptance_log, universe, lib_models):
    with criterion(acceptance_log, 7, "rescaling invariance, commutation, capture formulas, theta_3 and NE", 120):
        rng = random.Random(77)
        gen = FormulaGenerator(BIN, rng)
        for _ in range(200):
            m = rng.choice(lib_models)
            f = gen.pco(4)
            verdict = sat(m, f)
            for n in (2, 3, 5):
                assert sat(scale(m, n), f) == verdict, (f, m, n)

        for _ in range(200):
            m = rng.choice([x for x in lib_models if not x.is_empty()])
            n = rng.choice((2, 3, 5))
            pairs = gen.pairs(allow_inconsistent=False)
            assert canonical(intervene(m, pairs)) == canonical(intervene(scale(m, n), pairs))
            alpha = gen.co(3)
            a, b = restrict(m, alpha), restrict(scale(m, n), alpha)
            assert (a.is_empty() and b.is_empty()) or is_rescaling(a, b)

        # distribution capture: Theta of T holds on S iff S has T's distribution
        for i, (lid_t, rows_t) in enumerate(universe.models):
            if not rows_t:
                continue
            theta = theta_formula(lib_models[i].team, BIN)
            want = distribution(rows_t)
            for j, (lid_s, rows_s) in enumerate(universe.models):
                if rows_s:
                    assert sat(lib_models[j], theta) == (distribution(rows_s) == want)
        # law capture: Phi of F holds on a nonempty S iff S has laws F
        for lid in range(len(LAWS)):
            phi = phi_formula(library_laws(lid), BIN)
            for j, (lid_s, rows_s) in enumerate(universe.models):
                if rows_s:
                    assert sat(lib_models[j], phi) == (lid_s == lid)

        one = library_model(0, [("0", "1")])
        assert not sat(one, theta_k_formula(3))
        assert sat(scale(one, 3), theta_k_formula(3))
        assert not sat(library_model(0, []), NE())


# -- criterion 8 --------------------------------------------------------------


def test_criterion_8_definability(acceptance_log, universe):
    with criterion(acceptance_log, 8, "class formula models equal rescaling closure plus empties on 10 classes, bound 6", 300):
        rng = random.Random(88)
        big = oracle_universe(6)
        assert len(big) == 322
        for _ in range(10):
            members = []
            for _ in range(rng.randint(1, 3)):
                lid, rows = rng.choice(universe.models)
                rows = [r for r in rows for _ in range(rng.randint(1, 2))]
                members.append((lid, rows))
            k = FiniteClass([library_model(lid, rows) for lid, rows in members])
            report = check_definability(k, 6)
            # closure within the bound, counted independently
            dists = {(lid, frozenset(distribution(rows).items())) for lid, rows in members if rows}
            expected = sum(
                1
                for lid, rows in big
                if not rows or (lid, frozenset(distribution(rows).items())) in dists
            )
            assert report.checked == len(big)
            assert report.expected == expected
            assert report.agrees, report.summary()
            assert report.satisfying == expected
