use qrel_core::generators::group::{cyclic_group, cyclic_irreps, dual_group, max_monoid, s3_group, s3_irreps};
use qrel_core::generators::quantum_hamming;
use qrel_core::structures::*;
use qrel_core::subspace::c;
use qrel_core::{CMatrix, QSet, Relation, Subspace};

fn agree(r: &VerificationReport) {
    assert!(r.disagreements().is_empty(), "{r:#?}");
}

#[test]
fn hamming_two_is_a_metric() {
    let m = quantum_hamming(2).unwrap();
    let rep = check_metric(&m, MetricMode::Metric).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
    // the triangle formula lives on a 4096-dim block and is skipped
    assert_eq!(rep.notes.len(), 1);
    assert!(rep.notes[0].starts_with("metric.triangle"), "{:?}", rep.notes);
    assert!(rep.conditions.iter().any(|c| c.id == "metric.zero/formula"));
}

#[test]
fn hamming_three_is_a_metric() {
    let m = quantum_hamming(3).unwrap();
    let rep = check_metric(&m, MetricMode::Metric).unwrap();
    assert!(rep.passed, "{rep:#?}");
}

fn m2(e: [[f64; 2]; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| c(e[i][j], 0.0))
}

#[test]
fn non_scalar_zero_distance_is_only_pseudometric() {
    let x = QSet::from_dims("X", &[2]).unwrap();
    let r0 = Subspace::span(&[m2([[1., 0.], [0., 1.]]), m2([[1., 0.], [0., 0.]])], 2, 2).unwrap();
    let r1 = r0.complement();
    let fam = MetricFamily::new(
        &x,
        vec![
            (0.0, Relation::from_blocks(&x, &x, vec![(0, 0, r0)]).unwrap()),
            (1.0, Relation::from_blocks(&x, &x, vec![(0, 0, r1)]).unwrap()),
        ],
    )
    .unwrap();
    let p = check_metric(&fam, MetricMode::Pseudometric).unwrap();
    agree(&p);
    assert!(p.passed, "{p:#?}");
    let m = check_metric(&fam, MetricMode::Metric).unwrap();
    agree(&m);
    assert!(!m.passed);
    assert_eq!(m.failed_ids(), vec!["metric.separating", "metric.separating/formula"]);
}

#[test]
fn classical_path_metric() {
    // path a - b - c
    let x = QSet::classical("P", &["a", "b", "c"]).unwrap();
    let dist = [[0., 1., 2.], [1., 0., 1.], [2., 1., 0.]];
    let entries = [0.0, 1.0, 2.0]
        .iter()
        .map(|&a| {
            let r = Relation::from_fn(&x, &x, |i, j| {
                if dist[i][j] == a {
                    Subspace::full(1, 1)
                } else {
                    Subspace::zero(1, 1)
                }
            });
            (a, r)
        })
        .collect();
    let fam = MetricFamily::new(&x, entries).unwrap();
    let rep = check_metric(&fam, MetricMode::Metric).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
}

#[test]
fn overlapping_family_rejected() {
    let x = QSet::from_dims("X", &[2]).unwrap();
    let top = Relation::top(&x, &x);
    let r = MetricFamily::new(&x, vec![(0.0, top.clone()), (1.0, top)]);
    assert!(matches!(r, Err(StructureError::FamilyInvariantViolation(_))));
}

#[test]
fn classical_groups() {
    for g in [cyclic_group(2), cyclic_group(3)] {
        let rep = check_quantum_group(&g.mult, &g.unit).unwrap();
        agree(&rep);
        assert!(rep.passed, "{rep:#?}");
    }
}

#[test]
fn lifted_s3() {
    let g = s3_group();
    let rep = check_quantum_group(&g.mult, &g.unit).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
}

#[test]
fn dual_s3() {
    let g = dual_group(&s3_irreps()).unwrap();
    for f in [&g.mult, &g.unit] {
        assert!(check_function(f, FunctionMode::Function).unwrap().passed);
    }
    let rep = check_quantum_group(&g.mult, &g.unit).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
}

#[test]
fn dual_of_cyclic_is_cyclic() {
    let d = dual_group(&cyclic_irreps(3)).unwrap();
    let l = cyclic_group(3);
    assert_eq!(d.set.atom_dims(), l.set.atom_dims());
    for (i, j, b) in d.mult.blocks() {
        assert_eq!(b.rank(), l.mult.block(i, j).rank());
    }
}

#[test]
fn max_monoid_has_no_inverses() {
    let g = max_monoid();
    let rep = check_quantum_group(&g.mult, &g.unit).unwrap();
    agree(&rep);
    assert_eq!(
        rep.failed_ids(),
        vec!["quantum-group.right_inverse/formula", "quantum-group.left_inverse/formula"]
    );
}

fn rank1(i: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |a, b| if a == i && b == i { c(1., 0.) } else { c(0., 0.) })
}

/// Permutation matrix family on a one-dimensional space: p_ab = [perm(a) = b].
fn perm_family(perm: &[usize], rows: &[String], cols: &[String]) -> ProjectionFamily {
    let n = perm.len();
    let p = (0..n)
        .map(|a| (0..n).map(|b| if perm[a] == b { rank1(0, 1) } else { CMatrix::zeros(1, 1) }).collect())
        .collect();
    ProjectionFamily::new(1, rows.to_vec(), cols.to_vec(), p).unwrap()
}

fn rotated() -> ProjectionFamily {
    let h = 0.5;
    let p = CMatrix::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)]);
    let q = CMatrix::identity(2, 2) - &p;
    let l = vec!["0".to_string(), "1".to_string()];
    ProjectionFamily::new(2, l.clone(), l, vec![vec![p.clone(), q.clone()], vec![q, p]]).unwrap()
}

#[test]
fn magic_unitaries() {
    let rep = check_magic_unitary(&rotated()).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
    let c4 = SimpleGraph::cycle(4);
    let rep = check_magic_unitary(&perm_family(&[1, 2, 3, 0], c4.labels(), c4.labels())).unwrap();
    agree(&rep);
    assert!(rep.passed);
}

#[test]
fn game_witnesses() {
    let c4 = SimpleGraph::cycle(4);
    let k4 = SimpleGraph::complete(4);
    let rot = perm_family(&[1, 2, 3, 0], c4.labels(), c4.labels());
    let rep = check_iso_witness(&rot, &c4, &c4).unwrap();
    agree(&rep);
    assert!(rep.passed, "{rep:#?}");
    let id = perm_family(&[0, 1, 2, 3], c4.labels(), k4.labels());
    let rep = check_iso_witness(&id, &c4, &k4).unwrap();
    agree(&rep);
    assert_eq!(rep.failed_ids(), vec!["iso-witness.adjacency_reverse", "iso-witness.adjacency/formula"]);
    let hom = check_hom_witness(&id, &c4, &k4).unwrap();
    agree(&hom);
    assert!(hom.passed);

    let k2 = SimpleGraph::complete(2);
    let collapse = perm_family(&[0, 0], k2.labels(), k2.labels());
    let rep = check_hom_witness(&collapse, &k2, &k2).unwrap();
    agree(&rep);
    assert_eq!(rep.failed_ids(), vec!["hom-witness.adjacency", "hom-witness.adjacency/formula"]);

    let e2 = SimpleGraph::new(vec!["0".into(), "1".into()], &[]).unwrap();
    let rep = check_hom_witness(&rotated(), &e2, &e2).unwrap();
    agree(&rep);
    assert!(rep.passed);
    assert!(matches!(check_hom_witness(&rotated(), &c4, &c4), Err(StructureError::LabelMismatch(_))));
}

#[test]
fn conjugated_block_algebra_is_a_preorder_on_both_paths() {
    use qrel_core::generators::random::haar_unitary;
    use rand::SeedableRng;
    let unit = |i: usize, j: usize| CMatrix::from_fn(3, 3, |a, b| if (a, b) == (i, j) { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let x = QSet::from_dims("M3", &[3]).unwrap();
    for seed in [1u64, 4, 5] {
        let u = haar_unitary(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), 3);
        let mats: Vec<CMatrix> = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]
            .iter()
            .map(|&(i, j)| &u * unit(i, j) * u.adjoint())
            .collect();
        let r = Relation::from_blocks(&x, &x, vec![(0, 0, Subspace::span(&mats, 3, 3).unwrap())]).unwrap();
        let rep = check_preorder(&r).unwrap();
        agree(&rep);
        assert!(rep.passed, "{rep:#?}");
    }
}
