//! Randomized checks of the core invariants. Tree measures are compared
//! against an independent breadth-first path search over an explicit
//! adjacency list.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ctxtrust_core::dataset::{build_profiles, filter_profiles, Rate, Review};
use ctxtrust_core::evaluation::{error_percentage, pearson};
use ctxtrust_core::ontology::OntologyTree;
use ctxtrust_core::semantic::{ngd, ngd_with_log, nss, Epsilon, HitCounts, Ngd};
use ctxtrust_core::similarity::{
    inverse_distance_similarity, keyword_similarity, shared_path_ratio, task_similarity,
    weighted_path_similarity, KeywordContext, PathMode, TaskContext,
};
use ctxtrust_core::trust::predict_trust;
use proptest::prelude::*;

const CASES: u32 = 500;

/// Random tree given as parent indices (`parents[i] < i + 1` for node
/// `i + 1`) plus one weight per edge.
#[derive(Debug, Clone)]
struct RandomTree {
    parents: Vec<usize>,
    weights: Vec<f64>,
}

impl RandomTree {
    fn n(&self) -> usize {
        self.parents.len() + 1
    }

    fn build(&self, weighted: bool) -> OntologyTree {
        if self.parents.is_empty() {
            return OntologyTree::single("n0");
        }
        OntologyTree::from_edges(self.parents.iter().enumerate().map(|(i, &p)| {
            (
                format!("n{p}"),
                format!("n{}", i + 1),
                weighted.then_some(self.weights[i]),
            )
        }))
        .unwrap()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (i, &p) in self.parents.iter().enumerate() {
            adj[p].push(i + 1);
            adj[i + 1].push(p);
        }
        adj
    }

    fn edge_weight(&self, u: usize, v: usize) -> f64 {
        let child = u.max(v);
        self.weights[child - 1]
    }

    /// Breadth-first search; in a tree the first path found is the only one.
    fn brute_path(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.n()];
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

fn random_tree(max_nodes: usize) -> impl Strategy<Value = RandomTree> {
    (1..=max_nodes).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        (parents, prop::collection::vec(0.01f64..=1.0, n - 1))
            .prop_map(|(parents, weights)| RandomTree { parents, weights })
    })
}

fn tree_and_pair(max_nodes: usize) -> impl Strategy<Value = (RandomTree, usize, usize)> {
    random_tree(max_nodes).prop_flat_map(|t| {
        let n = t.n();
        (Just(t), 0..n, 0..n)
    })
}

fn valid_counts() -> impl Strategy<Value = HitCounts> {
    (1u64..=1_000_000_000_000)
        .prop_flat_map(|m| (Just(m), 1..=m, 1..=m))
        .prop_flat_map(|(m, fx, fy)| (Just(m), Just(fx), Just(fy), 0..=fx.min(fy)))
        .prop_map(|(m, fx, fy, fxy)| HitCounts::new(fx, fy, fxy, m).unwrap())
}

fn id(t: &OntologyTree, i: usize) -> ctxtrust_core::NodeId {
    t.id(&format!("n{i}")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn path_matches_brute_force_and_reverses((rt, a, b) in tree_and_pair(50)) {
        let t = rt.build(false);
        let fwd = t.path_between(id(&t, a), id(&t, b)).unwrap();
        let back = t.path_between(id(&t, b), id(&t, a)).unwrap();
        let labels: Vec<String> = fwd.nodes.iter().map(|&n| t.label(n).to_string()).collect();
        let expected: Vec<String> = rt.brute_path(a, b).iter().map(|i| format!("n{i}")).collect();
        prop_assert_eq!(labels, expected);
        let mut rev = back.nodes.clone();
        rev.reverse();
        prop_assert_eq!(&fwd.nodes, &rev);
        prop_assert_eq!(fwd.edges.len() + 1, fwd.nodes.len());
        let unique: BTreeSet<_> = fwd.nodes.iter().collect();
        prop_assert_eq!(unique.len(), fwd.nodes.len());
        let brute_len = rt.brute_path(a, b).len();
        prop_assert_eq!(
            t.intermediate_count(id(&t, a), id(&t, b)).unwrap(),
            brute_len.saturating_sub(2)
        );
    }

    #[test]
    fn tree_measures_match_brute_force((rt, a, b) in tree_and_pair(30)) {
        let t = rt.build(true);
        let (ia, ib) = (id(&t, a), id(&t, b));
        let path = rt.brute_path(a, b);

        let product: f64 = path.windows(2).map(|w| rt.edge_weight(w[0], w[1])).product();
        let got = weighted_path_similarity(&t, ia, ib, PathMode::Product).unwrap();
        prop_assert!((got - product).abs() <= 1e-12 * product.max(1.0));
        let got = weighted_path_similarity(&t, ia, ib, PathMode::Reciprocal).unwrap();
        prop_assert!((got - 1.0 / product).abs() <= 1e-9 * (1.0 / product));

        let inter = path.len().saturating_sub(2).max(1) as f64;
        prop_assert_eq!(inverse_distance_similarity(&t, ia, ib).unwrap(), 1.0 / inter);

        let to_root = |x: usize| -> BTreeSet<usize> { rt.brute_path(x, 0).into_iter().collect() };
        let (ra, rb) = (to_root(a), to_root(b));
        let ratio = ra.intersection(&rb).count() as f64 / ra.union(&rb).count() as f64;
        prop_assert_eq!(shared_path_ratio(&t, ia, ib).unwrap(), ratio);
    }

    #[test]
    fn tree_measures_symmetric_with_unit_self_similarity((rt, a, b) in tree_and_pair(30)) {
        let t = rt.build(true);
        let (ia, ib) = (id(&t, a), id(&t, b));
        for mode in [PathMode::Product, PathMode::Reciprocal] {
            let ab = weighted_path_similarity(&t, ia, ib, mode).unwrap();
            let ba = weighted_path_similarity(&t, ib, ia, mode).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0));
            prop_assert_eq!(weighted_path_similarity(&t, ia, ia, mode).unwrap(), 1.0);
        }
        prop_assert_eq!(
            inverse_distance_similarity(&t, ia, ib).unwrap(),
            inverse_distance_similarity(&t, ib, ia).unwrap()
        );
        prop_assert_eq!(shared_path_ratio(&t, ia, ib).unwrap(), shared_path_ratio(&t, ib, ia).unwrap());
        prop_assert_eq!(inverse_distance_similarity(&t, ia, ia).unwrap(), 1.0);
        prop_assert_eq!(shared_path_ratio(&t, ia, ia).unwrap(), 1.0);
    }

    #[test]
    fn weighted_ranges_and_min_weight_bound((rt, a, b) in tree_and_pair(30)) {
        let t = rt.build(true);
        let (ia, ib) = (id(&t, a), id(&t, b));
        let p = weighted_path_similarity(&t, ia, ib, PathMode::Product).unwrap();
        let r = weighted_path_similarity(&t, ia, ib, PathMode::Reciprocal).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert!(r >= 1.0);
        let path = rt.brute_path(a, b);
        if let Some(min_w) = path.windows(2).map(|w| rt.edge_weight(w[0], w[1])).reduce(f64::min) {
            prop_assert!(p <= min_w);
        }
        let s = shared_path_ratio(&t, ia, ib).unwrap();
        prop_assert!(s > 0.0 && s <= 1.0);
    }

    #[test]
    fn unit_weight_edge_leaves_product_unchanged((rt, a) in random_tree(30).prop_flat_map(|t| { let n = t.n(); (Just(t), 0..n) })) {
        // Hang a new leaf under `a` with weight 1: similarity from any node
        // to the leaf equals similarity to `a`.
        let mut extended = rt.clone();
        extended.parents.push(a);
        extended.weights.push(1.0);
        let t = extended.build(true);
        let leaf = id(&t, extended.n() - 1);
        for other in 0..rt.n() {
            let o = id(&t, other);
            let via_leaf = weighted_path_similarity(&t, o, leaf, PathMode::Product).unwrap();
            let direct = weighted_path_similarity(&t, o, id(&t, a), PathMode::Product).unwrap();
            prop_assert_eq!(via_leaf, direct);
        }
    }

    #[test]
    fn uniform_weights_decrease_with_path_length(
        (rt, a) in random_tree(30).prop_flat_map(|t| { let n = t.n(); (Just(t), 0..n) }),
        w in 0.05f64..0.99,
    ) {
        let mut uniform = rt.clone();
        uniform.weights = vec![w; uniform.weights.len()];
        let t = uniform.build(true);
        let ia = id(&t, a);
        let mut by_len: Vec<(usize, f64)> = (0..rt.n())
            .map(|b| {
                let ib = id(&t, b);
                let len = t.path_between(ia, ib).unwrap().edge_count();
                (len, weighted_path_similarity(&t, ia, ib, PathMode::Product).unwrap())
            })
            .collect();
        by_len.sort_by_key(|x| x.0);
        for pair in by_len.windows(2) {
            if pair[0].0 < pair[1].0 {
                prop_assert!(pair[0].1 > pair[1].1);
            } else {
                prop_assert_eq!(pair[0].1, pair[1].1);
            }
        }
    }

    #[test]
    fn tree_round_trips_through_text(rt in random_tree(40), weighted in any::<bool>()) {
        let t = rt.build(weighted);
        let again = OntologyTree::parse(&t.to_tsv()).unwrap();
        prop_assert_eq!(&again, &t);
    }

    #[test]
    fn weighing_keeps_shape_and_bounds(rt in random_tree(40), seed in any::<u64>(), eps in 0.001f64..0.5) {
        let t = rt.build(false);
        let epsilon = Epsilon::new(eps).unwrap();
        let mut state = seed;
        let mut source = |_: &str, _: &str| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let m = 1_000_000u64;
            let fx = 1 + (state >> 20) % m;
            let fy = 1 + (state >> 24) % m;
            let fxy = (state >> 8) % (fx.min(fy) + 1);
            HitCounts::new(fx, fy, fxy, m)
        };
        let weighed = t.weigh(&mut source, epsilon).unwrap().tree;
        prop_assert_eq!(weighed.root(), t.root());
        prop_assert_eq!(weighed.len(), t.len());
        prop_assert_eq!(weighed.edges().collect::<Vec<_>>(), t.edges().collect::<Vec<_>>());
        for id in t.node_ids() {
            prop_assert_eq!(weighed.label(id), t.label(id));
        }
        for e in weighed.edges() {
            let w = weighed.weight(e.child).unwrap();
            prop_assert!(w >= eps && w <= 1.0);
        }
    }

    #[test]
    fn ngd_symmetric_and_nss_in_range(c in valid_counts(), eps in 0.001f64..=1.0) {
        prop_assert_eq!(ngd(&c), ngd(&c.swapped()));
        let epsilon = Epsilon::new(eps).unwrap();
        let s = nss(&c, epsilon).unwrap();
        prop_assert_eq!(s, nss(&c.swapped(), epsilon).unwrap());
        prop_assert!(s >= eps && s <= 1.0);
    }

    #[test]
    fn ngd_base_invariant(c in valid_counts()) {
        let natural = ngd(&c).unwrap();
        let decimal = ngd_with_log(&c, f64::log10).unwrap();
        match (natural, decimal) {
            (Ngd::Finite(x), Ngd::Finite(y)) => prop_assert!((x - y).abs() <= 1e-9, "{} vs {}", x, y),
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn ngd_monotone_in_cooccurrence(
        (m, fx, fy) in (2u64..=1_000_000_000_000).prop_flat_map(|m| (Just(m), 1..=m, 1..=m)),
        steps in prop::collection::vec(0.0f64..1.0, 2..20),
    ) {
        let cap = fx.min(fy);
        let mut points: Vec<u64> = steps.iter().map(|s| 1 + (s * (cap - 1) as f64) as u64).collect();
        points.sort_unstable();
        let eps = Epsilon::DEFAULT;
        let mut last: Option<(f64, f64)> = None;
        for fxy in points {
            let c = HitCounts::new(fx, fy, fxy, m).unwrap();
            let d = ngd(&c).unwrap().value();
            let s = nss(&c, eps).unwrap();
            if let Some((pd, ps)) = last {
                prop_assert!(d <= pd);
                prop_assert!(s >= ps);
            }
            last = Some((d, s));
        }
    }

    #[test]
    fn keyword_symmetric_bounded(
        a in prop::collection::btree_set("[a-e]{1,2}", 1..6),
        b in prop::collection::btree_set("[a-e]{1,2}", 1..6),
    ) {
        let ka = KeywordContext::new(&a).unwrap();
        let kb = KeywordContext::new(&b).unwrap();
        let s = keyword_similarity(&ka, &kb);
        prop_assert_eq!(s, keyword_similarity(&kb, &ka));
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(keyword_similarity(&ka, &ka), 1.0);
        let brute = a.intersection(&b).count() as f64 / a.union(&b).count() as f64;
        prop_assert_eq!(s, brute);
    }

    #[test]
    fn task_symmetric_bounded(pairs in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..10)) {
        let (xa, xb): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let ta = TaskContext::new(xa).unwrap();
        let tb = TaskContext::new(xb).unwrap();
        let s = task_similarity(&ta, &tb).unwrap();
        prop_assert_eq!(s, task_similarity(&tb, &ta).unwrap());
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(task_similarity(&ta, &ta).unwrap(), 1.0);
    }

    #[test]
    fn prediction_monotone_and_clamped(
        r1 in 1.0f64..=5.0, r2 in 1.0f64..=5.0,
        s1 in 1e-6f64..3.0, s2 in 1e-6f64..3.0,
    ) {
        let (lo_r, hi_r) = (r1.min(r2), r1.max(r2));
        let (lo_s, hi_s) = (s1.min(s2), s1.max(s2));
        let p = predict_trust(lo_r, lo_s).unwrap();
        prop_assert!((0.0..=5.0).contains(&p));
        prop_assert!(predict_trust(hi_r, lo_s).unwrap() >= p);
        prop_assert!(predict_trust(lo_r, hi_s).unwrap() >= p);
        if lo_s <= 1.0 {
            prop_assert!(p <= lo_r);
        }
    }

    #[test]
    fn error_pct_range(pred in 0.0f64..=5.0, real in 1.0f64..=5.0) {
        let e = error_percentage(pred, real);
        prop_assert!((-100.0..=100.0).contains(&e.signed));
        prop_assert_eq!(e.abs, e.signed.abs());
        prop_assert_eq!(error_percentage(real, real).signed, 0.0);
    }

    #[test]
    fn pearson_affine_invariant(
        data in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
        a in 0.01f64..50.0, b in -50.0f64..50.0,
        c in 0.01f64..50.0, d in -50.0f64..50.0,
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
        prop_assume!(pearson(&xs, &ys).is_ok());
        let r = pearson(&xs, &ys).unwrap();
        let xs2: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let ys2: Vec<f64> = ys.iter().map(|y| c * y + d).collect();
        let r2 = pearson(&xs2, &ys2).unwrap();
        prop_assert!((r - r2).abs() <= 1e-9, "{} vs {}", r, r2);
        prop_assert!((-1.0..=1.0).contains(&r));
    }

    #[test]
    fn aggregates_bounded_and_filter_idempotent(
        sellers in prop::collection::btree_map(
            "[A-D]",
            prop::collection::vec(("[a-e]", 1u8..=5), 0..60),
            0..5,
        ),
        min_contexts in 1usize..4,
        min_ratings in 1usize..15,
    ) {
        let input: Vec<(String, Vec<Review>)> = sellers
            .iter()
            .map(|(s, rows)| {
                let reviews = rows
                    .iter()
                    .map(|(c, r)| Review::new(c.as_str(), Rate::new(*r).unwrap(), "", "", "").unwrap())
                    .collect();
                (s.clone(), reviews)
            })
            .collect();
        let profiles = build_profiles(input);
        for p in &profiles {
            for ratings in p.contexts().values() {
                let rates: Vec<u8> = ratings.reviews().iter().map(|r| r.rate.get()).collect();
                let lo = *rates.iter().min().unwrap() as f64;
                let hi = *rates.iter().max().unwrap() as f64;
                prop_assert!(ratings.aggregate() >= lo && ratings.aggregate() <= hi);
            }
        }
        let once = filter_profiles(&profiles, min_contexts, min_ratings);
        let twice = filter_profiles(&once, min_contexts, min_ratings);
        prop_assert_eq!(&once, &twice);
        let by_seller: BTreeMap<_, _> = once.iter().map(|p| (p.seller.clone(), p.contexts().len())).collect();
        prop_assert!(by_seller.values().all(|&n| n >= min_contexts));
    }
}
