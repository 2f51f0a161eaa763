use doc_ergodic::digraph::{self, communicating_classes, digraph_of, Digraph};
use doc_ergodic::linalg::{self, ComplexMatrix, Tolerances};
use doc_ergodic::sampling::{self, Pattern};
use doc_ergodic::stochastic::{self, classify_stochastic, spectral_verdict, StochasticMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn pattern(k: u8, p: f64) -> Pattern {
    match k % 4 {
        0 => Pattern::Dense,
        1 => Pattern::Sparse(p),
        2 => Pattern::Permutation { extra: (p * 3.0) as usize },
        _ => Pattern::Blocks,
    }
}

fn reach(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack = vec![s];
        r[s][s] = true;
        while let Some(v) = stack.pop() {
            for w in g.successors(v) {
                if !r[s][w] {
                    r[s][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    r
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// gcd of closed-walk lengths through `v`, from boolean powers up to `n²`.
fn walk_period(g: &Digraph, v: usize) -> usize {
    let n = g.n();
    let mut frontier = vec![false; n];
    frontier[v] = true;
    let mut p = 0;
    for len in 1..=n * n {
        let mut next = vec![false; n];
        for u in (0..n).filter(|&u| frontier[u]) {
            for w in g.successors(u) {
                next[w] = true;
            }
        }
        if next[v] {
            p = gcd(p, len);
        }
        frontier = next;
    }
    p
}

fn bool_power_positive(g: &Digraph, m: usize) -> bool {
    let n = g.n();
    let adj = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let mut p = DMatrix::<f64>::identity(n, n);
    for _ in 0..m {
        p = (&p * &adj).map(|x: f64| if x > 0.0 { 1.0 } else { 0.0 });
    }
    p.iter().all(|&x| x > 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classes_match_brute_force_reachability(seed in any::<u64>(), d in 1usize..=8, k in any::<u8>(), p in 0.1f64..0.9) {
        let mut r = sampling::rng(seed);
        let a = sampling::random_stochastic(&mut r, d, pattern(k, p));
        let g = digraph_of(a.matrix(), 1e-12);
        let dec = communicating_classes(&g);
        let rc = reach(&g);
        for i in 0..d {
            for j in 0..d {
                let same = rc[i][j] && rc[j][i];
                prop_assert_eq!(same, dec.class_of[i] == dec.class_of[j]);
            }
        }
        for (c, class) in dec.classes.iter().enumerate() {
            let v = class[0];
            let closed = (0..d).all(|w| !rc[v][w] || dec.class_of[w] == c);
            prop_assert_eq!(closed, dec.closed[c]);
            let has_loop = class.len() > 1 || g.has_edge(v, v);
            let want = if has_loop { walk_period(&g, v) } else { 0 };
            prop_assert_eq!(dec.periods[c], want);
        }
        // Canonical order: cross-class edges point backwards.
        for (i, j) in g.edges() {
            prop_assert!(dec.class_of[j] <= dec.class_of[i]);
        }
    }

    #[test]
    fn graph_and_spectral_verdicts_agree(seed in any::<u64>(), d in 1usize..=8, k in any::<u8>(), p in 0.1f64..0.9) {
        let mut r = sampling::rng(seed);
        let a = sampling::random_stochastic(&mut r, d, pattern(k, p));
        let rep = classify_stochastic(&a, &tol()).unwrap();
        let spec = linalg::eigenvalues(a.matrix(), &tol()).unwrap();
        let sv = spectral_verdict(&spec);
        prop_assert_eq!(rep.ergodic, sv.ergodic);
        prop_assert_eq!(rep.mixing, sv.mixing);
        prop_assert_eq!(rep.unit_multiplicity, rep.closed_class_count);
        // Implication chains.
        prop_assert!(!rep.primitive || rep.irreducible);
        prop_assert!(!rep.irreducible || rep.ergodic);
        prop_assert!(!rep.mixing || rep.ergodic);
        prop_assert!(!rep.primitive || rep.mixing);
        if rep.primitive {
            // Wielandt bound.
            prop_assert!(bool_power_positive(&digraph_of(a.matrix(), 1e-12), digraph::default_scrambling_cap(d)));
            prop_assert!(rep.scrambling_index >= 1);
        }
        if let Some(pi) = &rep.stationary {
            let api = a.matrix().apply_vec(&pi.iter().map(|&x| linalg::C64::new(x, 0.0)).collect::<Vec<_>>());
            for (x, y) in api.iter().zip(pi) {
                prop_assert!((x.re - y).abs() <= 1e-10);
            }
            prop_assert_eq!(rep.irreducible, pi.iter().all(|&x| x > 1e-12));
        }
    }

    #[test]
    fn cesaro_error_matches_fundamental_matrix(seed in any::<u64>(), d in 2usize..=6, n in 1usize..=60) {
        // For mixing A with limit P: Σ_{k<n} (Aᵏ − P) = (𝟙 − Aⁿ) Z with the
        // fundamental matrix Z = (𝟙 − A + P)⁻¹ − P, so the error is O(1/n).
        let mut r = sampling::rng(seed);
        let a = sampling::random_stochastic(&mut r, d, Pattern::Dense);
        let rep = classify_stochastic(&a, &tol()).unwrap();
        prop_assume!(rep.mixing);
        let pi = rep.stationary.unwrap();
        let p = stochastic::rank_one_limit(&pi);
        let id = ComplexMatrix::identity(d);
        let z_inv = &(&id - a.matrix()) + &p;
        let z = ComplexMatrix::new(z_inv.inner().clone().try_inverse().unwrap()).unwrap();
        let z = &z - &p;
        let want = (&(&id - &a.matrix().pow(n)) * &z).scale_real(1.0 / n as f64);
        let got = &stochastic::cesaro_mean(&a, n).unwrap() - &p;
        prop_assert!(got.max_abs_diff(&want) <= 1e-9);
    }
}

#[test]
fn scrambling_index_examples() {
    let c = Digraph::cycle(4);
    assert_eq!(digraph::scrambling_index(&c, digraph::default_scrambling_cap(4)), 0);
    let k = Digraph::complete(4);
    assert_eq!(digraph::scrambling_index(&k, 10), 1);
    assert!(stochastic::is_scrambling(&StochasticMatrix::uniform(3), 1e-12));
}
