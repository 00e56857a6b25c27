use fockdec::hecke::{tableau_permutation, GramOracle, HeckeAlgebra, HeckeElement, Permutation};
use fockdec::matrix::determinant;
use fockdec::schaper::schaper_det_rhs;
use fockdec::{
    partitions_of, BarMatrix, DecompositionMatrix, LaurentPoly, Partition, StandardTableau,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// All Murphy elements of `H(S_m)`, with their shapes and tableau pairs.
fn murphy_basis(
    alg: &HeckeAlgebra,
) -> Vec<(Partition, StandardTableau, StandardTableau, HeckeElement)> {
    let mut out = Vec::new();
    for shape in partitions_of(alg.degree()) {
        let tabs = shape.standard_tableaux();
        for s in &tabs {
            for t in &tabs {
                out.push((
                    shape.clone(),
                    s.clone(),
                    t.clone(),
                    alg.murphy_element(s, t).unwrap(),
                ));
            }
        }
    }
    out
}

fn coords(alg: &HeckeAlgebra, h: &HeckeElement) -> Vec<LaurentPoly> {
    alg.permutations().iter().map(|w| h.coeff(w)).collect()
}

#[test]
fn murphy_elements_form_a_basis() {
    for m in 1..=4 {
        let alg = HeckeAlgebra::new(m);
        let basis = murphy_basis(&alg);
        assert_eq!(basis.len(), alg.dim());
        // columns are Murphy elements in T-coordinates
        let cols: Vec<Vec<LaurentPoly>> = basis.iter().map(|b| coords(&alg, &b.3)).collect();
        let det = determinant(&cols).unwrap();
        assert_eq!(det.num_terms(), 1, "m={m}: det = {det}");
        let c = det.terms().next().unwrap().1.clone();
        assert!(c == BigInt::from(1) || c == BigInt::from(-1));
    }
}

/// The Gram entry for `(s, t)` is the coefficient of `m_{t^κ t^κ}` when
/// `m_{t^κ s} m_{t t^κ}` is expanded in the whole Murphy basis, `κ = λ'`.
#[test]
fn gram_entries_match_full_murphy_expansion() {
    for m in 1..=4 {
        let alg = HeckeAlgebra::new(m);
        let oracle = GramOracle::new(m).unwrap();
        let basis = murphy_basis(&alg);
        let cols: Vec<Vec<LaurentPoly>> = basis.iter().map(|b| coords(&alg, &b.3)).collect();
        let det = determinant(&cols).unwrap();
        for lambda in partitions_of(m) {
            let kappa = lambda.conjugate();
            let top = &kappa.standard_tableaux()[0];
            let slot = basis
                .iter()
                .position(|b| b.0 == kappa && &b.1 == top && &b.2 == top)
                .unwrap();
            let gram = oracle.gram_matrix(&lambda).unwrap();
            let tabs = lambda.standard_tableaux();
            for (i, s) in tabs.iter().enumerate() {
                for (j, t) in tabs.iter().enumerate() {
                    let left = alg.murphy_element(top, &s.transpose()).unwrap();
                    let right = alg.murphy_element(&t.transpose(), top).unwrap();
                    let prod = alg.multiply(&left, &right).unwrap();
                    let mut replaced = cols.clone();
                    replaced[slot] = coords(&alg, &prod);
                    let gamma = determinant(&replaced).unwrap().div_exact(&det).unwrap();
                    assert_eq!(gram.entries[i][j], gamma, "lambda={lambda} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn gram_matrices_are_symmetric_and_nonsingular() {
    for m in 0..=5 {
        let oracle = GramOracle::new(m).unwrap();
        for lambda in partitions_of(m) {
            let g = oracle.gram_matrix(&lambda).unwrap();
            assert_eq!(BigInt::from(g.dim()), lambda.dim_specht());
            assert!(g.is_symmetric(), "{lambda}");
            assert!(!g.determinant().unwrap().is_zero(), "{lambda}");
        }
    }
}

#[test]
fn determinant_valuation_matches_schaper() {
    for m in 0..=5 {
        let oracle = GramOracle::new(m).unwrap();
        for lambda in partitions_of(m) {
            for n in 2..=5 {
                let nu = oracle.gram_det_valuation(&lambda, n).unwrap();
                assert_eq!(
                    BigInt::from(nu),
                    schaper_det_rhs(&lambda, n).unwrap(),
                    "lambda={lambda} n={n}"
                );
            }
        }
    }
}

#[test]
fn rank_at_root_counts_simple_heads() {
    for n in [2, 3, 4] {
        for m in 0..=5 {
            let oracle = GramOracle::new(m).unwrap();
            let dec = DecompositionMatrix::compute(&BarMatrix::compute(n, m).unwrap()).unwrap();
            let ranks: Vec<usize> = dec
                .order()
                .iter()
                .map(|mu| oracle.gram_rank_at_root(mu, n).unwrap())
                .collect();
            for (mu, &r) in dec.order().iter().zip(&ranks) {
                assert_eq!(r == 0, !mu.is_n_regular(n), "mu={mu} n={n}");
            }
            for (row, lambda) in dec.order().iter().enumerate() {
                let total: BigInt = ranks
                    .iter()
                    .enumerate()
                    .map(|(c, &r)| dec.matrix.get(row, c).eval_at_one() * r)
                    .sum();
                assert_eq!(total, lambda.dim_specht(), "lambda={lambda} n={n}");
            }
        }
    }
}

#[test]
fn tableau_permutation_examples() {
    let t = StandardTableau::new(vec![vec![1, 3], vec![2]]).unwrap();
    // reading word 1 3 2 is its own inverse
    assert_eq!(
        tableau_permutation(&t),
        Permutation::new(vec![1, 3, 2]).unwrap()
    );
    let t = StandardTableau::new(vec![vec![1, 2, 4], vec![3, 5]]).unwrap();
    assert_eq!(
        tableau_permutation(&t),
        Permutation::new(vec![1, 2, 4, 3, 5]).unwrap()
    );
}

fn element(m: usize) -> impl Strategy<Value = HeckeElement> {
    let alg = HeckeAlgebra::new(m);
    let perms = alg.permutations().to_vec();
    prop::collection::vec((0..perms.len(), -3i64..=3, -2i64..=2), 0..5).prop_map(move |terms| {
        let mut x = HeckeElement::zero(m);
        for (k, c, e) in terms {
            x.add_term(perms[k].clone(), &LaurentPoly::monomial(c, e));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiplication_is_associative(a in element(4), b in element(4), c in element(4)) {
        let alg = HeckeAlgebra::new(4);
        let l = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let r = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn star_reverses_products(a in element(3), b in element(3)) {
        let alg = HeckeAlgebra::new(3);
        let l = alg.multiply(&a, &b).unwrap().star();
        let r = alg.multiply(&b.star(), &a.star()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn multiplication_distributes(a in element(3), b in element(3), c in element(3)) {
        let alg = HeckeAlgebra::new(3);
        let l = alg.multiply(&a, &(&b + &c)).unwrap();
        let r = &alg.multiply(&a, &b).unwrap() + &alg.multiply(&a, &c).unwrap();
        prop_assert_eq!(l, r);
    }
}
