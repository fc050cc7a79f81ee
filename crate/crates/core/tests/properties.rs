use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use plumbing_hf::graded_module::grading;
use plumbing_hf::hf_plumbing::{find_full_path, find_full_path_ordered, relation_neighbors, DEFAULT_SEARCH_CAP};
use plumbing_hf::{CharVector, GradedUModule, LatticeContext, ModuleMap, PlumbingGraph, UElement};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn random_tree(rng: &mut StdRng, max_size: usize, weights: (i64, i64)) -> PlumbingGraph {
    let n = rng.gen_range(1..=max_size);
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vertices: Vec<(String, i64)> =
        labels.iter().map(|l| (l.clone(), rng.gen_range(weights.0..=weights.1))).collect();
    let edges: Vec<(String, String)> =
        (1..n).map(|i| (labels[rng.gen_range(0..i)].clone(), labels[i].clone())).collect();
    PlumbingGraph::new(&vertices, &edges).unwrap()
}

/// Symmetric elimination over the rationals: definite iff every pivot is negative.
#[allow(clippy::needless_range_loop)]
fn ldl_negative_definite(q: &[Vec<i64>]) -> bool {
    let n = q.len();
    let mut a: Vec<Vec<BigRational>> =
        q.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_negative() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    true
}

#[test]
fn minor_test_matches_ldl() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut definite = 0;
    for _ in 0..100 {
        let g = random_tree(&mut rng, 10, (-9, -1));
        let q = g.intersection_form();
        let expected = ldl_negative_definite(&q.matrix);
        assert_eq!(q.is_negative_definite(), expected, "{:?}", q.matrix);
        definite += expected as usize;
    }
    assert!(definite > 0 && definite < 100);
}

#[test]
fn form_respects_relabelling() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let g = random_tree(&mut rng, 8, (-6, -1));
        let n = g.len();
        let vertices: Vec<(String, i64)> = g.vertices().iter().map(|v| (v.label.clone(), v.weight)).collect();
        let mut edges: Vec<(String, String)> =
            g.edges().map(|(a, b)| (g.label(a).to_string(), g.label(b).to_string())).collect();
        edges.shuffle(&mut rng);
        let reordered = PlumbingGraph::new(&vertices, &edges).unwrap();
        assert_eq!(reordered.intersection_form(), g.intersection_form());

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted: Vec<(String, i64)> = perm.iter().map(|&i| vertices[i].clone()).collect();
        let h = PlumbingGraph::new(&permuted, &edges).unwrap();
        let (qg, qh) = (g.intersection_form(), h.intersection_form());
        for i in 0..n {
            for j in 0..n {
                assert_eq!(qh.matrix[i][j], qg.matrix[perm[i]][perm[j]]);
            }
        }
        assert_eq!(qh.det, qg.det);
    }
}

#[test]
fn brieskorn_graphs_are_unimodular_definite_trees() {
    for (p, q, r) in [(2, 3, 5), (2, 3, 7), (2, 5, 7), (3, 4, 5), (2, 3, 11), (2, 7, 9), (3, 5, 7)] {
        let g = PlumbingGraph::brieskorn(p, q, r).unwrap();
        let v = g.validate();
        assert!(v.is_tree && v.is_negative_definite, "{p},{q},{r}");
        assert_eq!(v.determinant.abs(), BigInt::from(1));
    }
}

fn unimodular_trees(count: usize, seed: u64) -> Vec<PlumbingGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let g = random_tree(&mut rng, 7, (-6, -1));
        let v = g.validate();
        if v.is_negative_definite && v.determinant.abs() == BigInt::from(1) {
            out.push(g);
        }
    }
    out
}

#[test]
fn lattice_identities_on_random_trees() {
    for g in unimodular_trees(50, 3) {
        let ctx = LatticeContext::new(g);
        let n = ctx.len();
        let boxed = ctx.basic_box().unwrap();
        assert_eq!(boxed.len() as u128, ctx.box_size());
        for k in &boxed {
            assert!(ctx.is_characteristic(&k.0).unwrap());
            let total = ctx.square(&k.0).unwrap() + grading(n as i64);
            assert!(total.is_integer() && total.to_integer() % 8 == 0, "{k}");
            let e = UElement::new(k.clone(), 1);
            let g0 = ctx.hf_grading(&k.0, 1).unwrap();
            for nb in relation_neighbors(&ctx, &e) {
                assert_eq!(ctx.hf_grading(&nb.vector.0, nb.level).unwrap(), g0);
            }
        }
    }
}

#[test]
fn path_search_ignores_exploration_order() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut graphs = unimodular_trees(50, 3);
    graphs.push(
        PlumbingGraph::new(
            &[("v1", -1), ("v2", -2), ("v3", -5), ("v4", -4), ("v5", -2)],
            &[("v1", "v2"), ("v1", "v3"), ("v1", "v4"), ("v4", "v5")],
        )
        .unwrap(),
    );
    graphs.push(PlumbingGraph::brieskorn(2, 3, 7).unwrap());
    graphs.push(PlumbingGraph::brieskorn(2, 3, 5).unwrap());
    for g in graphs {
        let ctx = LatticeContext::new(g);
        let mut boxed = ctx.basic_box().unwrap();
        boxed.shuffle(&mut rng);
        boxed.truncate(40);
        for k in boxed {
            let base = find_full_path(&ctx, &k.0, DEFAULT_SEARCH_CAP).unwrap();
            if let Some(p) = &base {
                assert!(p.is_valid(&ctx));
            }
            for _ in 0..5 {
                let mut order: Vec<usize> = (0..ctx.len()).collect();
                order.shuffle(&mut rng);
                let other = find_full_path_ordered(&ctx, &k.0, DEFAULT_SEARCH_CAP, Some(&order)).unwrap();
                assert_eq!(other.is_some(), base.is_some(), "{}", CharVector(k.0.clone()));
                if let Some(p) = other {
                    assert!(p.is_valid(&ctx));
                }
            }
        }
    }
}

#[test]
fn module_involutions() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let towers: Vec<_> = (0..rng.gen_range(1..3)).map(|_| grading(rng.gen_range(-4..4))).collect();
        let mut finites: Vec<_> = (0..rng.gen_range(0..4)).map(|_| grading(rng.gen_range(-4..4))).collect();
        finites.push(towers[0]);
        let m = GradedUModule::new(towers, finites);
        assert_eq!(m.reverse_orientation().reverse_orientation(), m);
        let idx = m.finites().iter().position(|f| m.towers().contains(f)).unwrap();
        let swap = ModuleMap::generator_swap(&m, idx).unwrap();
        let twice = ModuleMap::compose(&[swap.clone(), swap.clone()]).unwrap();
        assert!(twice.equals(&ModuleMap::identity(&m)));
        for g in swap.check_gradings() {
            assert_eq!(swap.rank_at(g), m.rank_at(g));
        }
        assert!(swap.is_u_equivariant());
    }
}
