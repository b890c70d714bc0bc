//! Seeded property suites shared by the CLI, the acceptance tests and the proptests.
//!
//! Every suite draws its instances from a ChaCha8 stream seeded with the given seed,
//! so a (seed, cases) pair always replays the same instances.

use std::error::Error;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::generators::classical::ClassicalStructure;
use crate::generators::group::{cyclic_group, dual_group, max_monoid, s3_group, s3_irreps, QuantumGroupData};
use crate::generators::quantum_hamming;
use crate::generators::random::{
    gaussian, haar_unitary, random_formula, random_magic_unitary, random_qset, random_relation, random_sentence, random_subspace,
    Signature,
};
use crate::logic::{translate, Env, ForallMode, Formula, Interpreter};
use crate::qset::QSet;
use crate::relation::Relation;
use crate::structures::{
    check_function, check_graph, check_hom_witness, check_iso_witness, check_magic_unitary, check_metric,
    check_poset, check_preorder, check_quantum_group, FunctionMode, MetricMode, PosetMode, ProjectionFamily,
    SimpleGraph, VerificationReport,
};
use crate::subspace::c;
use crate::{CMatrix, Subspace};

type Res<T> = Result<T, Box<dyn Error>>;

/// Most failure messages kept per suite.
const MAX_EXAMPLES: usize = 8;

/// Outcome of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: usize,
    /// First few failure messages.
    pub examples: Vec<String>,
    /// Largest margin among checks that should be exactly zero.
    pub max_margin: f64,
    pub tol: f64,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A suite: name, default number of cases, runner.
pub struct Suite {
    pub name: &'static str,
    pub default_cases: usize,
    pub run: fn(u64, usize) -> SuiteReport,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "classical", default_cases: 500, run: classical },
    Suite { name: "lattice", default_cases: 200, run: lattice },
    Suite { name: "dagger-compact", default_cases: 100, run: dagger_compact },
    Suite { name: "quantifier", default_cases: 100, run: quantifier },
    Suite { name: "equality", default_cases: 3, run: equality },
    Suite { name: "correspondence", default_cases: 20, run: correspondence },
    Suite { name: "hamming", default_cases: 1, run: hamming },
    Suite { name: "games", default_cases: 10, run: games },
    Suite { name: "quantum-group", default_cases: 1, run: quantum_group },
    Suite { name: "weaver", default_cases: 50, run: weaver },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

struct Tally {
    rep: SuiteReport,
    current: usize,
    start: Instant,
}

impl Tally {
    fn new(name: &str, tol: f64) -> Self {
        Tally {
            rep: SuiteReport {
                name: name.to_string(),
                cases: 0,
                checks: 0,
                failures: 0,
                examples: Vec::new(),
                max_margin: 0.0,
                tol,
                seconds: 0.0,
            },
            current: 0,
            start: Instant::now(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.rep.failures += 1;
        if self.rep.examples.len() < MAX_EXAMPLES {
            self.rep.examples.push(format!("case {}: {msg}", self.current));
        }
    }

    /// A quantity that should vanish.
    fn zero(&mut self, what: &str, m: f64) {
        self.rep.checks += 1;
        if m.is_finite() {
            self.rep.max_margin = self.rep.max_margin.max(m);
        }
        if !(m <= self.rep.tol) {
            self.fail(format!("{what}: margin {m:.3e}"));
        }
    }

    fn expect(&mut self, what: &str, ok: bool) {
        self.rep.checks += 1;
        if !ok {
            self.fail(what.to_string());
        }
    }

    fn case(&mut self, k: usize, f: impl FnOnce(&mut Self) -> Res<()>) {
        self.current = k;
        self.rep.cases += 1;
        if let Err(e) = f(self) {
            self.fail(format!("error: {e}"));
        }
    }

    fn finish(mut self) -> SuiteReport {
        self.rep.seconds = self.start.elapsed().as_secs_f64();
        self.rep
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

fn random_tuples<R: Rng>(rng: &mut R, sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    let mut out = Vec::new();
    for i in 0..total {
        if rng.random_bool(0.5) {
            let mut t = vec![0; sizes.len()];
            let mut rest = i;
            for k in (0..sizes.len()).rev() {
                t[k] = rest % sizes[k];
                rest /= sizes[k];
            }
            out.push(t);
        }
    }
    out
}

/// Classical structure with one or two sorts of size 1..=4, a unary and a binary
/// relation, a unary function and a constant.
fn random_classical<R: Rng>(rng: &mut R) -> (ClassicalStructure, Vec<String>) {
    let mut cs = ClassicalStructure::new();
    let na = rng.random_range(1..=4);
    cs.add_set("A", &labels("a", na));
    let mut sorts = vec!["A".to_string()];
    let second = if rng.random_bool(0.5) {
        let nb = rng.random_range(1..=4);
        cs.add_set("B", &labels("b", nb));
        sorts.push("B".to_string());
        ("B", nb)
    } else {
        ("A", na)
    };
    let p = random_tuples(rng, &[na]);
    cs.add_rel("P", &["A"], &p);
    let r = random_tuples(rng, &[na, second.1]);
    cs.add_rel("R", &["A", second.0], &r);
    let f: Vec<usize> = (0..na).map(|_| rng.random_range(0..second.1)).collect();
    cs.add_fn("f", &["A"], second.0, &f);
    let k = [rng.random_range(0..na)];
    cs.add_fn("k", &[], "A", &k);
    (cs, sorts)
}

/// Quantum truth against brute-force evaluation on lifted classical structures.
pub fn classical(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("classical", 1e-8);
    let mut rng = rng_for(seed, 1);
    for k in 0..cases {
        t.case(k, |t| {
            let (cs, names) = random_classical(&mut rng);
            let lifted = cs.lift()?;
            let sorts: Vec<QSet> = names.iter().map(|n| lifted.set(n).clone()).collect();
            let sig = Signature::from_env(&lifted.env, &sorts);
            let depth = rng.random_range(1..=4);
            let f = random_sentence(&mut rng, &sig, depth)?;
            let want = cs.fol_eval(&lifted, &f)?;
            let margin = Interpreter::new(&lifted.env).truth_margin(&f)?;
            if want {
                t.zero("true sentence", margin);
            } else {
                t.expect(&format!("`{f}` is false but interprets as true"), margin > t.rep.tol);
            }
            Ok(())
        });
    }
    t.finish()
}

fn sub<R: Rng>(rng: &mut R, r: usize, c: usize) -> Subspace {
    let k = rng.random_range(0..=r * c);
    random_subspace(rng, r, c, k).expect("rank within ambient")
}

fn small_sub<R: Rng>(rng: &mut R, r: usize, c: usize, max_rank: usize) -> Subspace {
    let k = rng.random_range(0..=max_rank.min(r * c));
    random_subspace(rng, r, c, k).expect("rank within ambient")
}

/// Random subspace of `t`.
fn sub_of<R: Rng>(rng: &mut R, t: &Subspace) -> Subspace {
    let (r, c) = t.shape();
    let k = rng.random_range(0..=t.rank());
    if k == 0 {
        return Subspace::zero(r, c);
    }
    Subspace::from_vectors(r, c, t.basis() * gaussian(rng, t.rank(), k))
}

fn single(s: &Subspace) -> Relation {
    let (r, c) = s.shape();
    let dom = QSet::from_dims("A", &[c]).expect("positive");
    let cod = QSet::from_dims("B", &[r]).expect("positive");
    Relation::from_blocks(&dom, &cod, vec![(0, 0, s.clone())]).expect("block shape")
}

/// Complement laws, orthomodularity, the tensor residual and the Sasaki connectives.
pub fn lattice(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("lattice", 1e-7);
    let mut rng = rng_for(seed, 2);
    for k in 0..cases {
        t.case(k, |t| {
            let (r, c) = (rng.random_range(1..=6), rng.random_range(1..=6));
            let s = sub(&mut rng, r, c);
            let u = sub(&mut rng, r, c);
            let (sc, uc) = (s.complement(), u.complement());
            t.zero("S meet not S", s.meet(&sc)?.rank() as f64);
            t.zero("S join not S", s.join(&sc)?.distance(&Subspace::full(r, c)));
            t.zero("not not S", sc.complement().distance(&s));
            t.zero("de Morgan", s.join(&u)?.complement().distance(&sc.meet(&uc)?));
            let low = sub_of(&mut rng, &u);
            t.zero("orthomodular", u.distance(&low.join(&u.meet(&low.complement())?)?));

            let (vr, vc) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let (tr, tc) = (rng.random_range(1..=6 / vr), rng.random_range(1..=6 / vc));
            let v = sub(&mut rng, vr, vc);
            let t0 = sub(&mut rng, tr, tc);
            let w = v.tensor(&t0).join(&small_sub(&mut rng, vr * tr, vc * tc, 2))?;
            let res = Subspace::residual_factor(&v, &w, tr, tc)?;
            t.zero("V (x) residual <= W", v.tensor(&res).leq_margin(&w));
            t.zero("T0 <= residual", t0.leq_margin(&res));
            let cand = if rng.random_bool(0.5) { sub_of(&mut rng, &t0) } else { sub(&mut rng, tr, tc) };
            t.expect("residual adjunction", v.tensor(&cand).leq(&w) == cand.leq(&res));

            let (p, q) = (single(&s), single(&u));
            let top = Relation::top(p.dom(), p.cod());
            let arrow = p.sasaki_arrow(&q)?;
            t.zero("P meet (P -> Q) <= Q", p.meet(&arrow)?.leq_margin(&q)?);
            t.zero("(P -> Q) meet not Q <= not P", arrow.meet(&q.neg())?.leq_margin(&p.neg())?);
            t.expect("P -> Q is top iff P <= Q", arrow.approx_eq(&top) == p.leq(&q)?);
            let above = single(&p.block(0, 0).join(&small_sub(&mut rng, r, c, 3))?);
            t.zero("P -> (P join X) is top", p.sasaki_arrow(&above)?.distance(&top)?);
            let rr = single(&sub(&mut rng, r, c));
            t.expect(
                "Sasaki adjunction",
                p.sasaki_and(&q)?.leq(&rr)? == p.leq(&q.sasaki_arrow(&rr)?)?,
            );
            let big = p.sasaki_and(&q)?.join(&single(&small_sub(&mut rng, r, c, 3)))?;
            t.zero("P <= Q -> (P & Q join X)", p.leq_margin(&q.sasaki_arrow(&big)?)?);
            Ok(())
        });
    }
    t.finish()
}

fn qset<R: Rng>(rng: &mut R, name: &str) -> QSet {
    random_qset(rng, name, 2, 2)
}

/// Snake equations, dagger, monoidal product and the two permutation paths.
pub fn dagger_compact(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("dagger-compact", 1e-8);
    let mut rng = rng_for(seed, 3);
    for k in 0..cases {
        t.case(k, |t| {
            let x = qset(&mut rng, "X");
            let y = qset(&mut rng, "Y");
            let z = qset(&mut rng, "Z");
            let r = random_relation(&mut rng, &x, &y);
            t.zero("unbend o bend", r.bend()?.unbend(&x, &y)?.distance(&r)?);
            let p = random_relation(&mut rng, &x.product(&y.dual()), &QSet::unit());
            t.zero("bend o unbend", p.unbend(&x, &y)?.bend()?.distance(&p)?);
            let s = random_relation(&mut rng, &y, &z);
            t.zero(
                "dagger reverses composition",
                s.compose(&r)?.dagger().distance(&r.dagger().compose(&s.dagger())?)?,
            );
            t.zero("dagger is an involution", r.dagger().dagger().distance(&r)?);
            let (u, v, w) = (qset(&mut rng, "U"), qset(&mut rng, "V"), qset(&mut rng, "W"));
            let r2 = random_relation(&mut rng, &u, &v);
            let s2 = random_relation(&mut rng, &v, &w);
            t.zero(
                "cross is monoidal",
                s.cross(&s2)
                    .compose(&r.cross(&r2))?
                    .distance(&s.compose(&r)?.cross(&s2.compose(&r2)?))?,
            );
            t.zero("cross commutes with dagger", r.cross(&r2).dagger().distance(&r.dagger().cross(&r2.dagger()))?);
            let mut sorts = vec![x.clone(), y.dual(), z.clone()];
            if rng.random_bool(0.5) {
                sorts.push(u.clone());
            }
            let mut pi: Vec<usize> = (0..sorts.len()).collect();
            pi.shuffle(&mut rng);
            let src: Vec<QSet> = pi.iter().map(|&i| sorts[i].clone()).collect();
            let cod = if rng.random_bool(0.5) { QSet::unit() } else { w.clone() };
            let q = random_relation(&mut rng, &QSet::product_all(&src), &cod);
            t.zero(
                "permute paths agree",
                q.permute(&sorts, &pi)?.distance(&q.permute_via_braidings(&sorts, &pi)?)?,
            );
            Ok(())
        });
    }
    t.finish()
}

fn ctx(vars: &[(&str, &QSet)]) -> Vec<(String, QSet)> {
    vars.iter().map(|(v, s)| (v.to_string(), (*s).clone())).collect()
}

/// Interpreter laws on random quantum structures: translation, the two universal
/// quantifiers, implication order and the diagonal-quantifier laws.
pub fn quantifier(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("quantifier", 1e-8);
    let mut rng = rng_for(seed, 4);
    let unit = QSet::unit();
    for k in 0..cases {
        t.case(k, |t| {
            let x = qset(&mut rng, "X");
            let z = qset(&mut rng, "Z");
            let mut env = Env::new();
            for (name, sorts) in [
                ("P", vec![x.clone(), z.clone()]),
                ("Q", vec![z.clone()]),
                ("R", vec![x.dual(), z.dual()]),
            ] {
                let rel = random_relation(&mut rng, &QSet::product_all(&sorts), &unit);
                env.add_rel(name, sorts, rel)?;
            }
            env.add_fn("f", vec![x.clone()], x.clone(), Relation::identity(&x))?;
            let sig = Signature::from_env(&env, &[x.clone(), z.clone()]);
            let dual = Interpreter::new(&env);
            let resid = Interpreter::with_mode(&env, ForallMode::Residual);
            let draw = |scope: &[(String, QSet)], rng: &mut ChaCha8Rng| {
                let depth = rng.random_range(0..=2);
                random_formula(rng, &sig, depth, scope)
            };

            let open = ctx(&[("x3", &z), ("w", &x)]);
            let f = draw(&open, &mut rng)?;
            let direct = dual.interpret(&f, &open)?;
            t.zero("translation", dual.interpret(&translate(&f, &env)?, &open)?.distance(&direct)?);

            let body_ctx = ctx(&[("u", &x), ("x3", &z), ("w", &x)]);
            let body = draw(&body_ctx, &mut rng)?;
            let g = Formula::forall("u", &x, body);
            t.zero("residual forall", resid.interpret(&g, &open)?.distance(&dual.interpret(&g, &open)?)?);
            let body_ctx = ctx(&[("u", &z), ("us", &z.dual()), ("w", &x)]);
            let body = draw(&body_ctx, &mut rng)?;
            let g = Formula::forall_diag("u", "us", &z, body);
            let wctx = ctx(&[("w", &x)]);
            t.zero("residual diagonal forall", resid.interpret(&g, &wctx)?.distance(&dual.interpret(&g, &wctx)?)?);

            let phi = draw(&open, &mut rng)?;
            let psi = if rng.random_bool(0.5) {
                Formula::or(phi.clone(), draw(&open, &mut rng)?)
            } else {
                draw(&open, &mut rng)?
            };
            let order = dual.interpret(&phi, &open)?.leq(&dual.interpret(&psi, &open)?)?;
            let sentence = Formula::forall("x3", &z, Formula::forall("w", &x, Formula::implies(phi, psi)));
            t.expect("implication order", dual.truth(&sentence)? == order);

            let xs = ctx(&[("x1", &x), ("x2", &x.dual()), ("x3", &z)]);
            let ex = |f: Formula| Formula::exists_diag("x1", "x2", &x, f);
            let c3 = ctx(&[("x3", &z)]);
            let phi = draw(&xs, &mut rng)?;
            let other = draw(&xs, &mut rng)?;
            let ys = ctx(&[("y1", &x)]);
            let psi_y = draw(&ys, &mut rng)?;
            let c3y = ctx(&[("x3", &z), ("y1", &x)]);
            let lhs = dual.interpret(&ex(Formula::and(phi.clone(), psi_y.clone())), &c3y)?;
            let rhs = dual.interpret(&Formula::and(ex(phi.clone()), psi_y), &c3y)?;
            t.zero("exists commutes with a disjoint conjunct", lhs.distance(&rhs)?);
            let lhs = dual.interpret(&ex(Formula::or(phi.clone(), other.clone())), &c3)?;
            let rhs = dual.interpret(&Formula::or(ex(phi.clone()), ex(other)), &c3)?;
            t.zero("exists distributes over or", lhs.distance(&rhs)?);
            let psi = draw(&c3, &mut rng)?;
            let plain = dual.interpret(&psi, &c3)?;
            t.zero("vacuous exists", dual.interpret(&ex(psi.clone()), &c3)?.distance(&plain)?);
            let lhs = dual.interpret(&ex(Formula::or(phi.clone(), psi.clone())), &c3)?;
            let rhs = dual.interpret(&Formula::or(ex(phi), psi.clone()), &c3)?;
            t.zero("exists over or with a vacuous disjunct", lhs.distance(&rhs)?);

            let empty = QSet::from_dims("E", &[])?;
            let vac = dual.interpret(&Formula::exists_diag("x1", "x2", &empty, psi), &c3)?;
            t.expect("vacuous exists over the empty set is bottom", vac.is_bottom());
            if !plain.is_bottom() {
                t.expect("empty set excluded from the vacuous law", !vac.approx_eq(&plain));
            }
            Ok(())
        });
    }
    t.finish()
}

/// Full on the diagonal pairs of one-dimensional atoms of `X x X`, zero elsewhere.
fn diagonal(x: &QSet) -> Relation {
    let dom = x.product(x);
    let n = x.num_atoms();
    Relation::from_fn(&dom, &QSet::unit(), |i, _| {
        let (a, b) = (i / n, i % n);
        if a == b && x.dim(a) == 1 {
            Subspace::full(1, 1)
        } else {
            Subspace::zero(1, x.dim(a) * x.dim(b))
        }
    })
}

/// The sampled equality predicate against the closed form.
pub fn equality(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("equality", 1e-8);
    let sets = [
        QSet::from_dims("Q2", &[2]).expect("positive"),
        QSet::classical("C3", &["a", "b", "c"]).expect("labels"),
        QSet::from_dims("M12", &[1, 2]).expect("positive"),
    ];
    for k in 0..cases {
        t.case(k, |t| {
            let s = seed.wrapping_add(k as u64);
            for x in &sets {
                let d = Relation::delta_bruteforce(x, 64, s, true);
                t.zero(&format!("delta({x}) = equality"), d.distance(&Relation::equality(x))?);
                // without the transpose only one-dimensional diagonal atoms survive
                let nt = Relation::delta_bruteforce(x, 64, s, false);
                t.zero(&format!("untransposed delta({x})"), nt.distance(&diagonal(x))?);
            }
            Ok(())
        });
    }
    t.finish()
}

fn endo3(s: Subspace) -> Relation {
    let x = QSet::from_dims("M3", &[3]).expect("positive");
    Relation::from_blocks(&x, &x, vec![(0, 0, s)]).expect("block shape")
}

fn span3(mats: &[CMatrix]) -> Subspace {
    Subspace::span(mats, 3, 3).expect("3 x 3 matrices")
}

fn unit3(i: usize, j: usize) -> CMatrix {
    CMatrix::from_fn(3, 3, |a, b| if (a, b) == (i, j) { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn conj(u: &CMatrix, s: &Subspace) -> Subspace {
    let mats: Vec<CMatrix> = s.basis_matrices().iter().map(|m| u * m * u.adjoint()).collect();
    span3(&mats)
}

fn is_operator_system(s: &Subspace) -> bool {
    s.residual_norm(&CMatrix::identity(3, 3)) <= 1e-8 && s.star_image(crate::Star::Dagger).approx_eq(s)
}

fn is_algebra(s: &Subspace) -> Res<bool> {
    Ok(is_operator_system(s) && s.mul_span(s)?.leq(s))
}

fn agree_paths(t: &mut Tally, what: &str, rep: &VerificationReport) {
    let d = rep.disagreements();
    t.expect(&format!("{what}: direct and formula paths agree {d:?}"), d.is_empty());
}

/// Operator systems, unital *-subalgebras and nilpotent posets on M3, and the
/// non-unitary surjectivity counterexample.
pub fn correspondence(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("correspondence", 1e-8);
    let mut rng = rng_for(seed, 6);
    let id = CMatrix::identity(3, 3);
    for k in 0..cases {
        t.case(k, |t| {
            let a = gaussian(&mut rng, 3, 3);
            let b = gaussian(&mut rng, 3, 3);
            let s = match k % 5 {
                0 => span3(&[id.clone(), a.clone(), a.adjoint()]),
                1 => span3(&[id.clone(), &a + a.adjoint(), b.clone(), b.adjoint()]),
                2 => span3(&[id.clone(), a.clone()]),
                3 => span3(&[a.clone(), a.adjoint()]),
                _ => sub(&mut rng, 3, 3),
            };
            let rep = check_graph(&endo3(s.clone()))?;
            agree_paths(t, "graph", &rep);
            t.expect("graph conditions iff operator system", rep.passed == is_operator_system(&s));

            let u = haar_unitary(&mut rng, 3);
            let p = unit3(0, 0) + unit3(1, 1);
            let h = &a + a.adjoint();
            let alg = match k % 7 {
                0 => span3(&[id.clone()]),
                1 => span3(&[unit3(0, 0), unit3(1, 1), unit3(2, 2)]),
                2 => span3(&[unit3(0, 0), unit3(0, 1), unit3(1, 0), unit3(1, 1), unit3(2, 2)]),
                3 => span3(&[p.clone(), &id - &p]),
                4 => Subspace::full(3, 3),
                5 => span3(&[id.clone(), h]),
                _ => span3(&[id.clone(), a.clone(), a.adjoint()]),
            };
            let alg = conj(&u, &alg);
            let r = endo3(alg.clone());
            let g = check_graph(&r)?;
            let pre = check_preorder(&r)?;
            agree_paths(t, "preorder", &pre);
            t.expect(
                "graph and preorder conditions iff unital *-subalgebra",
                (g.passed && pre.passed) == is_algebra(&alg)?,
            );

            let nil = match k % 6 {
                0 => vec![unit3(0, 1)],
                1 => vec![unit3(0, 2)],
                2 => vec![unit3(0, 1), unit3(0, 2)],
                3 => vec![unit3(0, 2), unit3(1, 2)],
                4 => vec![unit3(0, 1) + unit3(1, 2), unit3(0, 2)],
                _ => vec![unit3(0, 1), unit3(0, 2), unit3(1, 2)],
            };
            let mut gens = nil.clone();
            gens.push(id.clone());
            let r = endo3(conj(&u, &span3(&gens)));
            let rep = check_poset(&r, PosetMode::Nilpotent)?;
            agree_paths(t, "nilpotent poset", &rep);
            t.expect("unit plus nilpotent algebra is a poset", rep.passed);
            let strict = r.meet(&Relation::identity(r.dom()).neg())?;
            t.zero("strict part is the nilpotent algebra", strict.distance(&endo3(conj(&u, &span3(&nil))))?);
            let sym = endo3(conj(&u, &span3(&[id.clone(), unit3(0, 1), unit3(1, 0)])));
            let rep = check_poset(&sym, PosetMode::Nilpotent)?;
            t.expect(
                "symmetric algebra fails antisymmetry",
                rep.failed_ids().contains(&"poset-nilpotent.antisymmetric"),
            );
            Ok(())
        });
    }
    t.case(cases, |t| {
        let x = QSet::from_dims("X", &[2])?;
        let a = CMatrix::from_fn(2, 2, |i, j| if i == j { c((i + 1) as f64, 0.0) } else { c(0.0, 0.0) });
        let r = Relation::from_blocks(&x, &x, vec![(0, 0, Subspace::span(&[a], 2, 2)?)])?;
        let top = Relation::top(&x, &x);
        t.zero("top o R^dagger = top", top.compose(&r.dagger())?.distance(&top)?);
        let id = Relation::identity(&x);
        t.expect("R o R^dagger >= I fails", !id.leq(&r.compose(&r.dagger())?)?);
        let rep = check_function(&r, FunctionMode::Surjective)?;
        t.expect("not a surjective function", !rep.passed);
        Ok(())
    });
    t.finish()
}

/// Quantum Hamming metrics against the Pauli count.
pub fn hamming(_seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("hamming", 1e-8);
    for k in 0..cases.max(1) {
        for n in [2usize, 3] {
            t.case(k, |t| {
                let m = quantum_hamming(n)?;
                let rep = check_metric(&m, MetricMode::Metric)?;
                agree_paths(t, "metric", &rep);
                t.expect(&format!("quantum_hamming({n}) is a metric: {:?}", rep.failed_ids()), rep.passed);
                t.expect(
                    &format!("rank of R1 at n = {n} is {}", 3 * n),
                    m.relations()[1].rank() == 3 * n,
                );
                Ok(())
            });
        }
    }
    t.finish()
}

fn rank_one(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |a, b| if a == 0 && b == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `p_ab = [b ∈ map(a)]` on a one-dimensional space.
fn scalar_family(map: &[Vec<usize>], rows: &[String], cols: &[String]) -> Res<ProjectionFamily> {
    let p = map
        .iter()
        .map(|bs| (0..cols.len()).map(|b| if bs.contains(&b) { rank_one(1) } else { CMatrix::zeros(1, 1) }).collect())
        .collect();
    Ok(ProjectionFamily::new(1, rows.to_vec(), cols.to_vec(), p)?)
}

fn perm_family(perm: &[usize], rows: &[String], cols: &[String]) -> Res<ProjectionFamily> {
    let map: Vec<Vec<usize>> = perm.iter().map(|&b| vec![b]).collect();
    scalar_family(&map, rows, cols)
}

fn rotated(l: &[String]) -> Res<ProjectionFamily> {
    let h = c(0.5, 0.0);
    let p = CMatrix::from_row_slice(2, 2, &[h, h, h, h]);
    let q = CMatrix::identity(2, 2) - &p;
    let l = l.to_vec();
    Ok(ProjectionFamily::new(2, l.clone(), l, vec![vec![p.clone(), q.clone()], vec![q, p]])?)
}

fn automorphisms(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        if (0..n).all(|a| (0..n).all(|b| g.adjacent(a, b) == g.adjacent(p[a], p[b]))) {
            out.push(p.to_vec());
        }
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn rejects(t: &mut Tally, what: &str, rep: &VerificationReport, id: &str) {
    t.expect(
        &format!("{what} rejected with `{id}` (failed: {:?})", rep.failed_ids()),
        !rep.passed && rep.failed_ids().contains(&id),
    );
}

/// Magic unitaries and perfect strategies for the homomorphism and isomorphism games.
pub fn games(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("games", 1e-8);
    let mut rng = rng_for(seed, 8);
    let c4 = SimpleGraph::cycle(4);
    let k4 = SimpleGraph::complete(4);
    let e4 = SimpleGraph::new(c4.labels().to_vec(), &[]).expect("edgeless graph");
    t.case(0, |t| {
        for (g, name) in [(&c4, "C4"), (&k4, "K4")] {
            let l = g.labels();
            for perm in automorphisms(g) {
                let p = perm_family(&perm, l, l)?;
                let what = format!("permutation {perm:?} on {name}");
                for rep in [check_magic_unitary(&p)?, check_iso_witness(&p, g, g)?, check_hom_witness(&p, g, g)?] {
                    agree_paths(t, &what, &rep);
                    t.expect(&format!("{what} passes {}", rep.kind), rep.passed);
                }
            }
        }
        let k2 = SimpleGraph::complete(2);
        let rot = rotated(k2.labels())?;
        for rep in [check_magic_unitary(&rot)?, check_iso_witness(&rot, &k2, &k2)?] {
            agree_paths(t, "rotated family", &rep);
            t.expect(&format!("rotated family passes {}", rep.kind), rep.passed);
        }
        Ok(())
    });
    t.case(1, |t| {
        let l = c4.labels().to_vec();
        let drop = scalar_family(&[vec![], vec![2], vec![3], vec![0]], &l, &l)?;
        rejects(t, "empty row", &check_magic_unitary(&drop)?, "magic-unitary.rows");
        let double = scalar_family(&[vec![1, 2], vec![2], vec![3], vec![0]], &l, &l)?;
        rejects(t, "doubled row", &check_magic_unitary(&double)?, "magic-unitary.same_row");
        let merge = perm_family(&[0, 0, 2, 3], &l, &l)?;
        rejects(t, "merged columns", &check_magic_unitary(&merge)?, "magic-unitary.columns");
        rejects(t, "merged columns", &check_magic_unitary(&merge)?, "magic-unitary.same_column");
        let rot = rotated(&labels("", 2))?;
        let cols = ProjectionFamily::new(
            2,
            rot.row_labels().to_vec(),
            rot.col_labels().to_vec(),
            vec![vec![rot.get(0, 0).clone(), rot.get(0, 1).clone()], vec![rot.get(0, 0).clone(), rot.get(0, 1).clone()]],
        )?;
        rejects(t, "repeated rotated row", &check_magic_unitary(&cols)?, "magic-unitary.same_column");

        let swap = perm_family(&[0, 2, 1, 3], &l, &l)?;
        let rep = check_hom_witness(&swap, &c4, &c4)?;
        agree_paths(t, "non-automorphism", &rep);
        rejects(t, "non-automorphism as homomorphism", &rep, "hom-witness.adjacency");
        t.expect("non-automorphism breaks adjacency only", rep.failed_ids() == ["hom-witness.adjacency", "hom-witness.adjacency/formula"]);
        let id = perm_family(&[0, 1, 2, 3], &l, &l)?;
        rejects(t, "C4 into K4", &check_iso_witness(&id, &c4, &k4)?, "iso-witness.adjacency_reverse");
        rejects(t, "K4 onto C4", &check_iso_witness(&id, &k4, &c4)?, "iso-witness.adjacency");
        rejects(t, "merged vertices", &check_iso_witness(&merge, &e4, &e4)?, "iso-witness.columns");
        rejects(t, "empty row", &check_iso_witness(&drop, &e4, &e4)?, "iso-witness.rows");
        Ok(())
    });
    for k in 0..cases {
        t.case(k + 2, |t| {
            let n = rng.random_range(2..=4);
            let d = rng.random_range(1..=3);
            let p = random_magic_unitary(&mut rng, n, d)?;
            let rep = check_magic_unitary(&p)?;
            agree_paths(t, "random magic unitary", &rep);
            t.expect("random magic unitary passes", rep.passed);
            let kn = SimpleGraph::complete(n);
            let relabel = ProjectionFamily::new(d, kn.labels().to_vec(), kn.labels().to_vec(), (0..n).map(|a| (0..n).map(|b| p.get(a, b).clone()).collect()).collect())?;
            let rep = check_iso_witness(&relabel, &kn, &kn)?;
            t.expect("random magic unitary is a K_n automorphism witness", rep.passed);
            Ok(())
        });
    }
    t.finish()
}

/// Lifted groups and the dual of S3 satisfy all group axioms; ({0,1}, max) lacks inverses.
pub fn quantum_group(_seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("quantum-group", 1e-8);
    for k in 0..cases.max(1) {
        t.case(k, |t| {
            let groups: Vec<(&str, QuantumGroupData)> = vec![
                ("Z2", cyclic_group(2)),
                ("Z3", cyclic_group(3)),
                ("S3", s3_group()),
                ("dual S3", dual_group(&s3_irreps())?),
            ];
            for (name, g) in &groups {
                let rep = check_quantum_group(&g.mult, &g.unit)?;
                agree_paths(t, name, &rep);
                t.expect(&format!("{name} passes: failed {:?}", rep.failed_ids()), rep.passed);
            }
            let m = max_monoid();
            let rep = check_quantum_group(&m.mult, &m.unit)?;
            agree_paths(t, "max monoid", &rep);
            t.expect(
                &format!("max monoid fails exactly the inverse laws: {:?}", rep.failed_ids()),
                rep.failed_ids() == ["quantum-group.right_inverse/formula", "quantum-group.left_inverse/formula"],
            );
            Ok(())
        });
    }
    t.finish()
}

fn two_atoms<R: Rng>(rng: &mut R, name: &str) -> QSet {
    let dims = [rng.random_range(1..=2), rng.random_range(1..=3)];
    QSet::from_dims(name, &dims).expect("positive")
}

/// Global subspaces against block relations.
pub fn weaver(seed: u64, cases: usize) -> SuiteReport {
    let mut t = Tally::new("weaver", 1e-8);
    let mut rng = rng_for(seed, 10);
    for k in 0..cases {
        t.case(k, |t| {
            let (x, y, z) = (two_atoms(&mut rng, "X"), two_atoms(&mut rng, "Y"), two_atoms(&mut rng, "Z"));
            let seed_v = small_sub(&mut rng, y.total_dim(), x.total_dim(), 2);
            let v = Relation::weaver_closure(&seed_v, &x, &y)?;
            let seed_w = small_sub(&mut rng, z.total_dim(), y.total_dim(), 2);
            let w = Relation::weaver_closure(&seed_w, &y, &z)?;
            let rv = Relation::weaver_to_blocks(&v, &x, &y)?;
            let rw = Relation::weaver_to_blocks(&w, &y, &z)?;
            t.zero("to_global o to_blocks", rv.weaver_to_global().distance(&v));
            let r = random_relation(&mut rng, &x, &y);
            t.zero("to_blocks o to_global", Relation::weaver_to_blocks(&r.weaver_to_global(), &x, &y)?.distance(&r)?);
            let wv = Relation::weaver_closure(&w.mul_span(&v)?, &x, &z)?;
            t.zero(
                "blocks of W.V compose",
                Relation::weaver_to_blocks(&wv, &x, &z)?.distance(&rw.compose(&rv)?)?,
            );
            Ok(())
        });
    }
    t.finish()
}
