//! Few distinct variables in a polynomial, and its use for k-leaf
//! out-branchings.

use hamkit::branchings::{detect_k_leaf, solve_nk_dv, DvConfig, MonomialListPoly};
use hamkit::graph::Digraph;

fn main() -> hamkit::Result<()> {
    // y0 y1 y2 y3 + y0^3 y1: the second monomial uses 2 of 4 variables
    let poly = MonomialListPoly::new(4, vec![(1, vec![1, 1, 1, 1]), (3, vec![3, 1, 0, 0])])?;
    for k in 1..=3 {
        let r = solve_nk_dv(&poly, &DvConfig::new(k, 0))?;
        println!("monomial with <= {} distinct variables: {:?}", 4 - k, r.answer);
    }

    let broom = Digraph::new(7, [(0, 1), (1, 2), (2, 3), (2, 4), (2, 5), (2, 6), (6, 0)])?;
    for k in 2..=5 {
        let r = detect_k_leaf(&broom, k, &DvConfig::new(k, 3))?;
        println!("broom, {k} leaves: {:?} ({} trials)", r.answer, r.trials_run);
    }

    // substitutions biased towards y -> a with probability k / (k + s)
    let skewed = DvConfig::new(4, 3).with_s_estimate(1);
    let r = detect_k_leaf(&broom, 4, &skewed)?;
    println!("skew {:.2}: {:?} ({} trials)", skewed.skew, r.answer, r.trials_run);
    Ok(())
}
